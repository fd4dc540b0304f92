#include "rsmkit/model.hpp"

#include <algorithm>

namespace rsm {

bool ModuleDef::has_in_port(const std::string& p) const {
  return std::find(in_ports.begin(), in_ports.end(), p) != in_ports.end();
}

bool ModuleDef::has_out_port(const std::string& p) const {
  return std::find(out_ports.begin(), out_ports.end(), p) != out_ports.end();
}

std::string placement_name(Placement p) {
  switch (p) {
    case Placement::HW: return "hw";
    case Placement::SW: return "sw";
    case Placement::FPGA: return "fpga";
  }
  return "?";
}

const FnDecl* ContextDef::find_fn(const std::string& fn) const {
  for (const auto& f : functions)
    if (f.name == fn) return &f;
  return nullptr;
}

const ModuleDef* SystemModel::find_module(const std::string& n) const {
  for (const auto& m : modules)
    if (m.name == n) return &m;
  return nullptr;
}

ModuleDef* SystemModel::find_module(const std::string& n) {
  for (auto& m : modules)
    if (m.name == n) return &m;
  return nullptr;
}

const ChannelDef* SystemModel::find_channel(const std::string& n) const {
  for (const auto& c : channels)
    if (c.name == n) return &c;
  return nullptr;
}

const KernelDef* SystemModel::find_kernel(const std::string& n) const {
  for (const auto& k : kernels)
    if (k.name == n) return &k;
  return nullptr;
}

const ContextDef* SystemModel::find_context(const std::string& n) const {
  for (const auto& c : contexts)
    if (c.name == n) return &c;
  return nullptr;
}

std::optional<Placement> SystemModel::placement_of(const std::string& module) const {
  auto it = placements.find(module);
  if (it == placements.end()) return std::nullopt;
  return it->second;
}

std::optional<Value> SystemModel::fn_latency(const std::string& fn) const {
  for (const auto& c : contexts)
    if (const FnDecl* f = c.find_fn(fn)) return f->latency_cycles;
  return std::nullopt;
}

std::vector<std::string> SystemModel::contexts_with_fn(const std::string& fn) const {
  std::vector<std::string> out;
  for (const auto& c : contexts)
    if (c.find_fn(fn)) out.push_back(c.name);
  return out;
}

SystemModel SystemModel::clone() const {
  SystemModel m;
  m.name = name;
  for (const auto& k : kernels) {
    KernelDef kd;
    kd.name = k.name;
    kd.params = k.params;
    kd.body = clone_block(k.body);
    kd.pos = k.pos;
    m.kernels.push_back(std::move(kd));
  }
  for (const auto& mod : modules) {
    ModuleDef md;
    md.name = mod.name;
    md.in_ports = mod.in_ports;
    md.out_ports = mod.out_ports;
    md.behavior = clone_block(mod.behavior);
    md.hw_annotation = mod.hw_annotation;
    md.pos = mod.pos;
    m.modules.push_back(std::move(md));
  }
  m.channels = channels;
  m.bus = bus;
  m.placements = placements;
  m.contexts = contexts;
  m.initial_context = initial_context;
  return m;
}

}  // namespace rsm
