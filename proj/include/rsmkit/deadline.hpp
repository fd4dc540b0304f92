#pragma once

#include <optional>
#include <string>

#include "rsmkit/sim.hpp"

namespace rsm {

struct DeadlineOutcome {
  Cycle wcet = 0;
  bool pass = false;
};

/// Static worst-case path length from a module's entry to its exit (or
/// between two compute labels in the same block). Statement costs: annotated
/// compute cycles, bus words for partition-crossing channel operations,
/// bitstream words for reconfigure, declared latency for callfpga.
/// Single-task bound: cross-module contention is observed dynamically via
/// StatsReport, not modeled here.
DeadlineOutcome deadline_check(const CompiledModel& cm, const std::string& module, Cycle bound,
                               const std::optional<std::string>& src_label = std::nullopt,
                               const std::optional<std::string>& sink_label = std::nullopt);

}  // namespace rsm
