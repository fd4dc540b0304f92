#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rsmkit/elaborate.hpp"
#include "rsmkit/interp.hpp"

namespace rsm {

using Cycle = std::int64_t;

struct TraceRecord {
  std::string channel;  // channel name, or "MODULE.port" for environment ports
  std::int64_t seq;     // per-channel FIFO index
  Value value;
};

struct Trace {
  std::vector<TraceRecord> records;       // global commit order
  std::vector<Cycle> commit_cycles;       // parallel to records; empty when untimed
  bool deadlocked = false;

  std::map<std::string, std::vector<Value>> by_channel() const;
  std::map<std::string, std::vector<Cycle>> cycles_by_channel() const;
};

struct Stimulus {
  std::map<std::string, std::vector<Value>> inputs;  // "MODULE.port" -> values
  std::uint64_t seed = 0;
};

struct Transaction {
  enum class Kind { Data, Bitstream };
  Kind kind = Kind::Data;
  std::string initiator;
  std::int64_t words = 1;
  Cycle start_cycle = 0;
  Cycle end_cycle = 0;
  std::string channel;  // DATA transfers
  std::string context;  // BITSTREAM downloads
};

struct DeadlineSpec {
  std::string id;
  std::string src_channel;
  std::string dst_channel;
  Cycle max_cycles = 0;
};

struct DeadlineResult {
  std::string property_id;
  Cycle observed = 0;
  Cycle bound = 0;
  bool pass = true;
};

struct StatsReport {
  Cycle total_cycles = 0;
  Cycle bus_busy_cycles = 0;
  double bus_utilization = 0.0;
  std::int64_t reconfig_count = 0;
  std::int64_t bitstream_words_total = 0;
  std::map<std::string, std::int64_t> max_occupancy;  // per channel
  std::map<std::string, Cycle> busy_cycles;           // per module
  std::vector<DeadlineResult> deadline_results;
  std::vector<Transaction> transactions;
};

struct SimLimits {
  Cycle max_cycles = 100000000;  // LivelockGuard threshold
};

struct ReconfigViolation : std::runtime_error {
  ReconfigViolation(std::string f, std::string loaded, Cycle c, std::string mod, SourcePos p)
      : std::runtime_error("function '" + f + "' called while context '" +
                           (loaded.empty() ? std::string("<none>") : loaded) +
                           "' is loaded (cycle " + std::to_string(c) + ")"),
        fn(std::move(f)),
        loaded_context(std::move(loaded)),
        cycle(c),
        module(std::move(mod)),
        pos(p) {}
  std::string fn;
  std::string loaded_context;  // empty = NONE
  Cycle cycle;
  std::string module;
  SourcePos pos;
};

struct LivelockGuardError : std::runtime_error {
  explicit LivelockGuardError(Cycle cap)
      : std::runtime_error("cycle count exceeded livelock guard cap " + std::to_string(cap)),
        cap(cap) {}
  Cycle cap;
};

struct UnannotatedCompute : std::runtime_error {
  UnannotatedCompute(std::string mod, std::string lbl)
      : std::runtime_error("compute '" + lbl + "' in module '" + mod + "' has no cycle count"),
        module(std::move(mod)),
        label(std::move(lbl)) {}
  std::string module;
  std::string label;
};

/// Level-1 functional simulation: cooperative round-robin, unbounded FIFOs,
/// writes never block. Per-module fault/coverage hooks are optional.
Trace simulate_untimed(const CompiledModel& cm, const Stimulus& stim,
                       std::vector<ExecHooks>* hooks = nullptr);

/// Levels 2 and 3: discrete-event simulation with a shared bus and, at level
/// 3, FPGA context loading. Data values match simulate_untimed on the same
/// model and stimulus.
std::pair<Trace, StatsReport> simulate_timed(const CompiledModel& cm, const Stimulus& stim,
                                             int level,
                                             const std::vector<DeadlineSpec>& deadlines = {},
                                             const SimLimits& limits = {});

struct Divergence {
  std::string channel;
  std::int64_t index = 0;
  std::optional<Value> value_a;
  std::optional<Value> value_b;
};

/// EQUAL iff per-channel value sequences are identical (a missing channel is
/// an empty sequence). Otherwise the first divergence, channels in
/// lexicographic order, then lowest index.
std::optional<Divergence> compare_traces(const Trace& a, const Trace& b);

}  // namespace rsm
