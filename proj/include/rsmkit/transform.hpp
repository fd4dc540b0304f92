#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "rsmkit/model.hpp"

namespace rsm {

struct UnknownModuleError : std::runtime_error {
  explicit UnknownModuleError(const std::string& name)
      : std::runtime_error("unknown module '" + name + "'"), module(name) {}
  std::string module;
};

struct UnknownContextError : std::runtime_error {
  explicit UnknownContextError(const std::string& name)
      : std::runtime_error("unknown context '" + name + "'"), context(name) {}
  std::string context;
};

/// Groups the named modules into the software partition: they are placed SW
/// (cyclostatic on one CPU), every other module is placed HW, and a bus is
/// instantiated when none exists. Channels between grouped modules become
/// CPU-internal by construction; external ports are untouched.
SystemModel transform_group_sw(const SystemModel& m, const std::set<std::string>& modules,
                               std::optional<BusDef> bus = std::nullopt);

struct MoveDirection {
  Placement target = Placement::HW;
  std::string context;  // required for FPGA moves

  static MoveDirection to_hw() { return {Placement::HW, ""}; }
  static MoveDirection to_sw() { return {Placement::SW, ""}; }
  static MoveDirection to_fpga(std::string ctx) { return {Placement::FPGA, std::move(ctx)}; }
};

/// Re-places one module. FPGA moves require the target context to exist and
/// to carry every kernel the module invokes.
SystemModel transform_move_module(const SystemModel& m, const std::string& name,
                                  const MoveDirection& dir);

}  // namespace rsm
