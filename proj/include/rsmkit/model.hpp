#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rsmkit/ast.hpp"

namespace rsm {

struct PortRef {
  std::string module;
  std::string port;

  std::string str() const { return module + "." + port; }
  bool operator==(const PortRef& o) const = default;
};

struct ModuleDef {
  std::string name;
  std::vector<std::string> in_ports;
  std::vector<std::string> out_ports;
  Block behavior;
  // Manual timing annotations; override inline compute cycles per label.
  std::map<std::string, Value> hw_annotation;
  SourcePos pos;

  bool has_in_port(const std::string& p) const;
  bool has_out_port(const std::string& p) const;
};

struct ChannelDef {
  std::string name;
  PortRef src;
  PortRef dst;
  std::optional<Value> capacity;  // nullopt = unbounded
  bool self_loop = false;
  SourcePos pos;
};

struct BusDef {
  std::string name;
  Value cycles_per_word = 1;
};

enum class Placement { HW, SW, FPGA };

std::string placement_name(Placement p);

struct FnDecl {
  std::string name;
  Value latency_cycles = 0;
};

struct ContextDef {
  std::string name;
  std::vector<FnDecl> functions;
  Value bitstream_words = 1;
  SourcePos pos;

  const FnDecl* find_fn(const std::string& fn) const;
};

struct SystemModel {
  std::string name;
  std::vector<KernelDef> kernels;
  std::vector<ModuleDef> modules;
  std::vector<ChannelDef> channels;
  std::optional<BusDef> bus;
  std::map<std::string, Placement> placements;  // keyed by module name
  std::vector<ContextDef> contexts;             // empty = no configuration map
  std::optional<std::string> initial_context;

  const ModuleDef* find_module(const std::string& n) const;
  ModuleDef* find_module(const std::string& n);
  const ChannelDef* find_channel(const std::string& n) const;
  const KernelDef* find_kernel(const std::string& n) const;
  const ContextDef* find_context(const std::string& n) const;
  std::optional<Placement> placement_of(const std::string& module) const;
  bool has_config_map() const { return !contexts.empty(); }
  /// Latency of fn in any context declaring it (identical across contexts).
  std::optional<Value> fn_latency(const std::string& fn) const;
  /// Contexts that declare fn.
  std::vector<std::string> contexts_with_fn(const std::string& fn) const;

  SystemModel clone() const;
};

}  // namespace rsm
