#pragma once

#include <string>

#include "rsmkit/sim.hpp"

namespace rsm {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Trace file: one `channel seq value` line per record, in global commit
/// order. A leading `# deadlocked` comment marks aborted runs.
void write_trace_file(const Trace& t, const std::string& path);
Trace read_trace_file(const std::string& path);

/// Stimulus file: optional `seed N` line plus `input MODULE.port v1 v2 ...`
/// lines (repeated lines for one port append).
void write_stimulus_file(const Stimulus& s, const std::string& path);
Stimulus read_stimulus_file(const std::string& path);

std::string stats_to_text(const StatsReport& s);
std::string stats_to_json_string(const StatsReport& s);

}  // namespace rsm
