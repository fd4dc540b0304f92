#include "rsmkit/validate.hpp"

#include <functional>
#include <map>
#include <set>

#include "rsmkit/ast_walk.hpp"

namespace rsm {
namespace {

struct Checker {
  const SystemModel& m;
  Diagnostics out;

  void err(SourcePos pos, const std::string& msg) {
    out.push_back({Severity::Error, pos, msg});
  }

  // ---- base invariants (level 1) ----
  void unique_names() {
    std::set<std::string> seen;
    for (const auto& mod : m.modules)
      if (!seen.insert(mod.name).second)
        err(mod.pos, "duplicate module name '" + mod.name + "'");
    seen.clear();
    for (const auto& k : m.kernels)
      if (!seen.insert(k.name).second)
        err(k.pos, "duplicate kernel name '" + k.name + "'");
    seen.clear();
    for (const auto& c : m.channels)
      if (!seen.insert(c.name).second)
        err(c.pos, "duplicate channel name '" + c.name + "'");
    seen.clear();
    for (const auto& c : m.contexts)
      if (!seen.insert(c.name).second)
        err(c.pos, "duplicate context name '" + c.name + "'");
  }

  void ports() {
    for (const auto& mod : m.modules) {
      std::set<std::string> seen;
      for (const auto& p : mod.in_ports)
        if (!seen.insert(p).second)
          err(mod.pos, "duplicate port '" + p + "' in module '" + mod.name + "'");
      for (const auto& p : mod.out_ports)
        if (!seen.insert(p).second)
          err(mod.pos, "duplicate port '" + p + "' in module '" + mod.name + "'");
    }
  }

  void channels() {
    std::map<std::string, std::string> bound;  // "mod.port/dir" -> channel
    for (const auto& ch : m.channels) {
      const ModuleDef* src = m.find_module(ch.src.module);
      const ModuleDef* dst = m.find_module(ch.dst.module);
      if (!src)
        err(ch.pos, "channel '" + ch.name + "': unknown module '" + ch.src.module + "'");
      else if (!src->has_out_port(ch.src.port))
        err(ch.pos, "channel '" + ch.name + "': '" + ch.src.str() + "' is not an out port");
      if (!dst)
        err(ch.pos, "channel '" + ch.name + "': unknown module '" + ch.dst.module + "'");
      else if (!dst->has_in_port(ch.dst.port))
        err(ch.pos, "channel '" + ch.name + "': '" + ch.dst.str() + "' is not an in port");
      auto bind = [&](const PortRef& p, const char* dir) {
        std::string key = p.str() + "/" + dir;
        auto it = bound.find(key);
        if (it != bound.end())
          err(ch.pos, "port '" + p.str() + "' bound to both channel '" + it->second +
                          "' and '" + ch.name + "'");
        else
          bound[key] = ch.name;
      };
      bind(ch.src, "out");
      bind(ch.dst, "in");
      if (ch.src.module == ch.dst.module && !ch.self_loop)
        err(ch.pos, "channel '" + ch.name + "' connects module '" + ch.src.module +
                        "' to itself; flag it 'selfloop'");
      if (ch.src.module != ch.dst.module && ch.self_loop)
        err(ch.pos, "channel '" + ch.name + "' marked selfloop but endpoints differ");
      if (ch.capacity && *ch.capacity < 1)
        err(ch.pos, "channel '" + ch.name + "' capacity must be positive");
    }
  }

  void bus_and_placements() {
    if (m.bus && m.bus->cycles_per_word < 1)
      err({0, 0}, "bus cycles_per_word must be positive");
    bool any_sw_fpga = false;
    bool any_fpga = false;
    for (const auto& [name, p] : m.placements) {
      if (!m.find_module(name))
        err({0, 0}, "placement names unknown module '" + name + "'");
      if (p == Placement::SW || p == Placement::FPGA) any_sw_fpga = true;
      if (p == Placement::FPGA) any_fpga = true;
    }
    if (any_sw_fpga && !m.bus)
      err({0, 0}, "SW or FPGA placement requires a bus");
    if (any_fpga && !m.has_config_map())
      err({0, 0}, "FPGA placement requires configuration map");
  }

  void contexts() {
    std::map<std::string, Value> latency;  // fn -> latency, across contexts
    for (const auto& c : m.contexts) {
      if (c.bitstream_words < 1)
        err(c.pos, "context '" + c.name + "' bitstream word count must be positive");
      std::set<std::string> in_ctx;
      for (const auto& f : c.functions) {
        if (!in_ctx.insert(f.name).second)
          err(c.pos, "function '" + f.name + "' declared twice in context '" + c.name + "'");
        if (f.latency_cycles < 0)
          err(c.pos, "function '" + f.name + "' latency must be non-negative");
        auto it = latency.find(f.name);
        if (it == latency.end())
          latency[f.name] = f.latency_cycles;
        else if (it->second != f.latency_cycles)
          err(c.pos, "function '" + f.name + "' has different latencies across contexts");
        if (!m.find_kernel(f.name))
          err(c.pos, "context '" + c.name + "' declares unknown kernel '" + f.name + "'");
      }
    }
    if (m.initial_context && !m.find_context(*m.initial_context))
      err({0, 0}, "initial_context names unknown context '" + *m.initial_context + "'");
  }

  void annotations() {
    for (const auto& mod : m.modules) {
      std::set<std::string> labels;
      for_each_stmt(mod.behavior, [&](const Stmt& s) {
        if (s.kind == Stmt::Kind::Compute && !labels.insert(s.label).second)
          err(s.pos, "duplicate compute label '" + s.label + "' in module '" + mod.name + "'");
      });
      for (const auto& [label, cyc] : mod.hw_annotation) {
        if (!labels.count(label))
          err(mod.pos, "annotation for unknown compute label '" + label + "' in module '" +
                           mod.name + "'");
        if (cyc < 0)
          err(mod.pos, "annotation cycles for '" + label + "' must be non-negative");
      }
    }
  }

  void statements() {
    for (const auto& mod : m.modules) {
      for_each_stmt(mod.behavior, [&](const Stmt& s) {
        switch (s.kind) {
          case Stmt::Kind::Read:
            if (!mod.has_in_port(s.port))
              err(s.pos, "read from '" + s.port + "': not an in port of module '" +
                             mod.name + "'");
            break;
          case Stmt::Kind::Write:
            if (!mod.has_out_port(s.port))
              err(s.pos, "write to '" + s.port + "': not an out port of module '" +
                             mod.name + "'");
            break;
          case Stmt::Kind::Reconfigure:
            if (!m.has_config_map())
              err(s.pos, "reconfigure requires a configuration map");
            else if (!m.find_context(s.context))
              err(s.pos, "reconfigure names unknown context '" + s.context + "'");
            break;
          case Stmt::Kind::CallFpga: {
            if (!m.has_config_map())
              err(s.pos, "callfpga requires a configuration map");
            else if (m.contexts_with_fn(s.callee).empty())
              err(s.pos, "function '" + s.callee + "' is not declared in any context");
            check_call_target(s);
            break;
          }
          case Stmt::Kind::Call:
            check_call_target(s);
            break;
          case Stmt::Kind::Repeat:
            if (s.count < 1)
              err(s.pos, "repeat count must be a positive integer literal");
            break;
          case Stmt::Kind::Return:
            err(s.pos, "return is only allowed in kernels");
            break;
          default:
            break;
        }
      });
    }
  }

  void check_call_target(const Stmt& s) {
    const KernelDef* k = m.find_kernel(s.callee);
    if (!k) {
      err(s.pos, "call of unknown kernel '" + s.callee + "'");
      return;
    }
    if (k->params.size() != s.args.size())
      err(s.pos, "kernel '" + s.callee + "' expects " + std::to_string(k->params.size()) +
                     " argument(s), got " + std::to_string(s.args.size()));
  }

  void kernels() {
    // Statement restrictions and trailing return.
    for (const auto& k : m.kernels) {
      if (k.body.empty() || k.body.back()->kind != Stmt::Kind::Return)
        err(k.pos, "kernel '" + k.name + "' must end with a return statement");
      for (size_t i = 0; i < k.body.size(); ++i) {
        if (k.body[i]->kind == Stmt::Kind::Return && i + 1 != k.body.size())
          err(k.body[i]->pos, "return must be the last statement of kernel '" + k.name + "'");
      }
      for_each_stmt(k.body, [&](const Stmt& s) {
        switch (s.kind) {
          case Stmt::Kind::Read:
          case Stmt::Kind::Write:
          case Stmt::Kind::Compute:
          case Stmt::Kind::Reconfigure:
          case Stmt::Kind::CallFpga:
            err(s.pos, "kernels are pure: statement not allowed in kernel '" + k.name + "'");
            break;
          case Stmt::Kind::Call: {
            const KernelDef* callee = m.find_kernel(s.callee);
            if (!callee)
              err(s.pos, "call of unknown kernel '" + s.callee + "'");
            else if (callee->params.size() != s.args.size())
              err(s.pos, "kernel '" + s.callee + "' expects " +
                             std::to_string(callee->params.size()) + " argument(s)");
            break;
          }
          case Stmt::Kind::Return:
            break;  // position checked above
          default:
            break;
        }
        // return must not be nested
        for (const Block* b : {&s.body, &s.else_body})
          for (const auto& inner : *b)
            if (inner->kind == Stmt::Kind::Return)
              err(inner->pos, "return cannot appear inside if/repeat bodies");
      });
    }
    // Acyclic call graph (recursion is a semantic error).
    std::map<std::string, int> state;  // 0 unvisited, 1 visiting, 2 done
    std::function<bool(const KernelDef&)> dfs = [&](const KernelDef& k) -> bool {
      int& st = state[k.name];
      if (st == 1) return false;
      if (st == 2) return true;
      st = 1;
      bool ok = true;
      for_each_stmt(k.body, [&](const Stmt& s) {
        if (s.kind != Stmt::Kind::Call) return;
        if (const KernelDef* callee = m.find_kernel(s.callee)) {
          if (!dfs(*callee)) ok = false;
        }
      });
      st = 2;
      return ok;
    };
    for (const auto& k : m.kernels)
      if (!dfs(k)) {
        err(k.pos, "recursive kernel call involving '" + k.name + "'");
        break;
      }
  }

  // ---- definite-assignment analysis ----
  void use_expr(const Expr& e, const std::set<std::string>& assigned, const std::string& where) {
    for_each_expr(e, [&](const Expr& x) {
      if (x.kind == Expr::Kind::Var && !assigned.count(x.var))
        err(x.pos, "variable '" + x.var + "' may be used before assignment in " + where);
    });
  }

  void assigned_block(const Block& b, std::set<std::string>& assigned, const std::string& where) {
    for (const auto& s : b) {
      switch (s->kind) {
        case Stmt::Kind::Read:
          assigned.insert(s->var);
          break;
        case Stmt::Kind::Write:
        case Stmt::Kind::Return:
          if (s->value) use_expr(*s->value, assigned, where);
          break;
        case Stmt::Kind::Assign:
          if (s->value) use_expr(*s->value, assigned, where);
          assigned.insert(s->var);
          break;
        case Stmt::Kind::Call:
        case Stmt::Kind::CallFpga:
          for (const auto& a : s->args) use_expr(*a, assigned, where);
          assigned.insert(s->var);
          break;
        case Stmt::Kind::If: {
          if (s->value) use_expr(*s->value, assigned, where);
          std::set<std::string> then_set = assigned, else_set = assigned;
          assigned_block(s->body, then_set, where);
          assigned_block(s->else_body, else_set, where);
          // definite after the if = assigned in both arms
          std::set<std::string> isect;
          for (const auto& v : then_set)
            if (else_set.count(v)) isect.insert(v);
          assigned = std::move(isect);
          break;
        }
        case Stmt::Kind::Repeat:
          // body runs at least once, so its assignments are definite
          assigned_block(s->body, assigned, where);
          break;
        default:
          break;
      }
    }
  }

  void definite_assignment() {
    for (const auto& mod : m.modules) {
      std::set<std::string> assigned;
      assigned_block(mod.behavior, assigned, "module '" + mod.name + "'");
    }
    for (const auto& k : m.kernels) {
      std::set<std::string> assigned(k.params.begin(), k.params.end());
      assigned_block(k.body, assigned, "kernel '" + k.name + "'");
    }
  }

  // ---- level 2 ----
  void level2() {
    for (const auto& mod : m.modules)
      if (!m.placements.count(mod.name))
        err(mod.pos, "module '" + mod.name + "' has no placement (required at level 2)");
    for (const auto& mod : m.modules) {
      for_each_stmt(mod.behavior, [&](const Stmt& s) {
        if (s.kind != Stmt::Kind::Compute) return;
        if (!s.cycles && !mod.hw_annotation.count(s.label))
          err(s.pos, "compute '" + s.label + "' in module '" + mod.name +
                         "' lacks a cycle annotation (required at level 2)");
      });
    }
  }

  // ---- level 3 ----
  void level3() {
    for (const auto& mod : m.modules) {
      auto pl = m.placement_of(mod.name);
      if (pl != Placement::FPGA) continue;
      for (const auto& fn : invoked_kernels(mod.behavior))
        if (m.contexts_with_fn(fn).empty())
          err(mod.pos, "function '" + fn + "' of FPGA module '" + mod.name +
                           "' is not in any configuration");
    }
    auto tasks = fabric_task_modules(m);
    if (tasks.size() > 1) {
      std::string names;
      for (const auto& t : tasks) names += (names.empty() ? "" : ", ") + t;
      err({0, 0}, "reconfigure/callfpga must be confined to a single software task; found in: " +
                      names);
    } else if (tasks.size() == 1) {
      auto pl = m.placement_of(tasks[0]);
      if (pl && *pl != Placement::SW)
        err({0, 0}, "module '" + tasks[0] +
                        "' issues reconfigure/callfpga but is not placed SW");
    }
  }
};

}  // namespace

std::vector<std::string> invoked_kernels(const Block& b) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for_each_stmt(b, [&](const Stmt& s) {
    if (s.kind == Stmt::Kind::Call || s.kind == Stmt::Kind::CallFpga)
      if (seen.insert(s.callee).second) out.push_back(s.callee);
  });
  return out;
}

std::vector<std::string> fabric_task_modules(const SystemModel& m) {
  std::vector<std::string> out;
  for (const auto& mod : m.modules) {
    bool hit = false;
    for_each_stmt(mod.behavior, [&](const Stmt& s) {
      if (s.kind == Stmt::Kind::Reconfigure || s.kind == Stmt::Kind::CallFpga) hit = true;
    });
    if (hit) out.push_back(mod.name);
  }
  return out;
}

Diagnostics validate(const SystemModel& m, int level) {
  Checker c{m, {}};
  c.unique_names();
  c.ports();
  c.channels();
  c.bus_and_placements();
  c.contexts();
  c.annotations();
  c.statements();
  c.kernels();
  c.definite_assignment();
  if (level >= 2) c.level2();
  if (level >= 3) c.level3();
  return std::move(c.out);
}

int infer_level(const SystemModel& m) {
  bool all_placed = !m.modules.empty();
  for (const auto& mod : m.modules)
    if (!m.placements.count(mod.name)) all_placed = false;
  if (!all_placed) return 1;
  bool any_fpga = false;
  for (const auto& [_, p] : m.placements)
    if (p == Placement::FPGA) any_fpga = true;
  if (any_fpga || !fabric_task_modules(m).empty()) return 3;
  return 2;
}

}  // namespace rsm
