#pragma once

#include <string>
#include <vector>

#include "rsmkit/coverage.hpp"
#include "rsmkit/diagnostics.hpp"
#include "rsmkit/sim.hpp"

namespace rsm {

/// Trace-evaluable property. Invariants compare every record of a channel
/// against a constant; deadlines check observed latencies from the stats
/// report; golden properties pin a channel to an expected sequence.
struct Property {
  enum class Kind { Invariant, Deadline, Golden };
  Kind kind = Kind::Invariant;
  std::string id;

  std::string channel;  // Invariant/Golden
  BinOp op = BinOp::Ge;
  Value threshold = 0;

  std::string src_channel, dst_channel;  // Deadline
  Cycle max_cycles = 0;

  std::vector<Value> expected;  // Golden
};

struct PropertyResult {
  std::string id;
  bool pass = true;
  std::int64_t violation_index = -1;  // first violating record
  Cycle observed = -1;                // deadline latency
  std::string detail;
};

struct UnknownChannelError : std::runtime_error {
  explicit UnknownChannelError(const std::string& ch)
      : std::runtime_error("property references unknown channel '" + ch + "'"), channel(ch) {}
  std::string channel;
};

/// Check that referenced channels exist (environment ports count with their
/// MODULE.port names).
void validate_properties(const CompiledModel& cm, const std::vector<Property>& props);

/// Evaluate properties over one simulation's trace and (optionally) stats.
/// Deadline properties need the stats report; without one they fail with a
/// diagnostic detail.
std::vector<PropertyResult> check_properties(const Trace& trace, const StatsReport* stats,
                                             const std::vector<Property>& props);

std::vector<DeadlineSpec> deadline_specs(const std::vector<Property>& props);

struct PropertyFailsOnGoldenModel : std::runtime_error {
  explicit PropertyFailsOnGoldenModel(const std::string& id)
      : std::runtime_error("property '" + id + "' fails on the fault-free model"),
        property_id(id) {}
  std::string property_id;
};

struct PropertyCoverage {
  FaultSite site;
  std::vector<std::string> detected_by;  // property ids, possibly empty
};

struct PropertyCoverageReport {
  std::vector<PropertyCoverage> per_fault;
  double property_coverage_pct = 0;
  std::int64_t faults_total = 0, faults_detected = 0;
  std::vector<FaultSite> undetected;
};

/// Property coverage checking: inject every fault site, rerun the testbench
/// (untimed), and count a fault as covered when at least one trace-evaluable
/// property fails on the faulty run. Precondition: every property passes on
/// the fault-free runs. Deadline properties are timing-only and never detect
/// faults here.
PropertyCoverageReport pcc(const CompiledModel& cm, const std::vector<Property>& props,
                           const std::vector<Stimulus>& testbench, int jobs = 1);

/// One property per line:
///   invariant <channel> <op> <int>
///   deadline <src> <dst> <cycles>
///   golden <channel> <v0> <v1> ...
std::vector<Property> parse_properties(const std::string& text, Diagnostics& diags);
std::vector<Property> parse_property_file(const std::string& path, Diagnostics& diags);

/// Golden-equality property set: one golden property per channel of the
/// trace (the strongest trace-evaluable set; detection then coincides with
/// trace comparison).
std::vector<Property> golden_properties(const Trace& golden);

}  // namespace rsm
