#pragma once

#include <string>
#include <vector>

#include "rsmkit/diagnostics.hpp"
#include "rsmkit/model.hpp"

namespace rsm {

/// Level-gated structural validation. Level 1 checks the base model
/// invariants; level 2 additionally requires full placement and complete
/// timing annotations; level 3 additionally requires the configuration map
/// to cover every FPGA-hosted function and confines reconfigure/callfpga to
/// a single software task. Rule sets are cumulative, so a model clean at
/// level 3 is clean at levels 1 and 2.
Diagnostics validate(const SystemModel& m, int level);

/// Highest refinement level the model is structurally set up for.
int infer_level(const SystemModel& m);

/// Kernel names invoked via call or callfpga anywhere in the block.
std::vector<std::string> invoked_kernels(const Block& b);

/// Names of modules whose behavior contains reconfigure or callfpga.
std::vector<std::string> fabric_task_modules(const SystemModel& m);

}  // namespace rsm
