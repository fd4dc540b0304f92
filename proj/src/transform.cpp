#include "rsmkit/transform.hpp"

#include "rsmkit/validate.hpp"

namespace rsm {

SystemModel transform_group_sw(const SystemModel& m, const std::set<std::string>& modules,
                               std::optional<BusDef> bus) {
  for (const auto& name : modules)
    if (!m.find_module(name)) throw UnknownModuleError(name);
  SystemModel out = m.clone();
  if (!out.bus) out.bus = bus ? *bus : BusDef{"sysbus", 1};
  out.placements.clear();
  for (const auto& mod : out.modules)
    out.placements[mod.name] = modules.count(mod.name) ? Placement::SW : Placement::HW;
  return out;
}

SystemModel transform_move_module(const SystemModel& m, const std::string& name,
                                  const MoveDirection& dir) {
  const ModuleDef* mod = m.find_module(name);
  if (!mod) throw UnknownModuleError(name);
  if (dir.target == Placement::FPGA) {
    const ContextDef* ctx = m.find_context(dir.context);
    if (!ctx) throw UnknownContextError(dir.context);
    for (const auto& fn : invoked_kernels(mod->behavior))
      if (!ctx->find_fn(fn))
        throw UnknownContextError(dir.context + "' does not carry kernel '" + fn);
  }
  SystemModel out = m.clone();
  out.placements[name] = dir.target;
  return out;
}

}  // namespace rsm
