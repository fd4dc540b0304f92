#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rsmkit/cfg.hpp"
#include "rsmkit/elaborate.hpp"
#include "rsmkit/sim.hpp"

namespace rsm {

/// Result of the reconfiguration-consistency analysis. A certificate states
/// that on every syntactic path each fabric call executes under a context
/// containing its function; a counterexample is a syntactic entry-to-call
/// path witnessing one reachable bad context.
struct Verdict {
  enum class Kind { Certificate, Counterexample };
  Kind kind = Kind::Certificate;

  // counterexample fields
  std::vector<int> path;              // CFG node ids: entry .. offending call
  std::string offending_fn;
  int offending_node = -1;
  SourcePos offending_pos;
  std::string offending_context;      // reachable context lacking fn; "" = none loaded
  std::set<std::string> missing_in;   // contexts reaching the call that lack fn
  bool may_be_infeasible = false;

  // per-node abstract states ("" denotes the no-context element)
  std::vector<std::set<std::string>> node_states;
  int iterations = 0;  // product states processed by the fixpoint
};

/// Forward dataflow over the powerset of contexts plus NONE, computed as
/// reachability on the (node, context) product graph. Certificates are sound;
/// counterexample paths are syntactic candidates.
Verdict analyze(const CFG& cfg, const std::vector<ContextDef>& contexts,
                const std::optional<std::string>& initial);

/// Locates the single software task carrying reconfigure/callfpga, builds its
/// CFG and analyzes it. A model without fabric calls yields a (vacuous)
/// certificate. Returns the analyzed module name alongside the verdict.
struct ModelVerdict {
  std::string task_module;  // empty when no fabric statements exist
  Verdict verdict;
};
ModelVerdict analyze_model(const CompiledModel& cm);

struct ReplayOutcome {
  enum class Kind { Confirmed, NotTriggered };
  Kind kind = Kind::NotTriggered;
  Stimulus witness;        // valid when confirmed
  int attempts = 0;
};

/// Dynamic confirmation of a counterexample: searches seeded random stimuli
/// for a level-3 run that trips ReconfigViolation at the offending call.
/// NOT_TRIGGERED is a legitimate outcome for infeasible syntactic paths.
ReplayOutcome replay_counterexample(const CompiledModel& cm, const Verdict& verdict,
                                    std::uint64_t seed = 1, int budget = 200);

}  // namespace rsm
