#include "rsmkit/elaborate.hpp"

#include <cassert>
#include <functional>
#include <stdexcept>

#include "rsmkit/ast_walk.hpp"

namespace rsm {
namespace {

// Rename every variable of a cloned kernel body using the given map.
void rename_vars(Block& b, const std::map<std::string, std::string>& names) {
  for_each_stmt_mut(b, [&](Stmt& s) {
    if (!s.var.empty()) {
      auto it = names.find(s.var);
      if (it != names.end()) s.var = it->second;
    }
    auto fix_expr = [&](Expr& e) {
      std::function<void(Expr&)> go = [&](Expr& x) {
        if (x.kind == Expr::Kind::Var) {
          auto it = names.find(x.var);
          if (it != names.end()) x.var = it->second;
        }
        if (x.lhs) go(*x.lhs);
        if (x.rhs) go(*x.rhs);
      };
      go(e);
    };
    if (s.value) fix_expr(*s.value);
    for (auto& a : s.args) fix_expr(*a);
  });
}

struct Inliner {
  const std::vector<ElaboratedKernel>& kernels;
  const std::map<std::string, int>& kernel_index;
  int counter = 0;

  Block run(const Block& src) {
    Block out;
    for (const auto& s : src) expand(*s, out);
    return out;
  }

  void expand(const Stmt& s, Block& out) {
    if (s.kind == Stmt::Kind::Call) {
      auto it = kernel_index.find(s.callee);
      assert(it != kernel_index.end());
      const ElaboratedKernel& k = kernels[static_cast<size_t>(it->second)];
      std::map<std::string, std::string> names;
      std::string prefix = "$" + k.name + "$" + std::to_string(counter++) + "$";
      for (const auto& v : k.vars) names[v] = prefix + v;
      // bind arguments to renamed parameters
      for (size_t i = 0; i < k.num_params; ++i) {
        auto bind = std::make_unique<Stmt>();
        bind->kind = Stmt::Kind::Assign;
        bind->pos = s.pos;
        bind->var = names.at(k.vars[i]);
        bind->value = s.args[i]->clone();
        out.push_back(std::move(bind));
      }
      Block body = clone_block(k.body);
      rename_vars(body, names);
      // trailing return becomes an assignment to the call result
      assert(!body.empty() && body.back()->kind == Stmt::Kind::Return);
      StmtPtr ret = std::move(body.back());
      body.pop_back();
      for (auto& inner : body) out.push_back(std::move(inner));
      auto res = std::make_unique<Stmt>();
      res->kind = Stmt::Kind::Assign;
      res->pos = s.pos;
      res->var = s.var;
      res->value = std::move(ret->value);
      out.push_back(std::move(res));
      return;
    }
    StmtPtr c = s.clone();
    c->body = run(s.body);
    c->else_body = run(s.else_body);
    // repeat 1 is equivalent to its body; unwrap it
    if (c->kind == Stmt::Kind::Repeat && c->count == 1) {
      for (auto& inner : c->body) out.push_back(std::move(inner));
      return;
    }
    out.push_back(std::move(c));
  }
};

struct IdAssigner {
  int next_stmt = 0;
  int next_cond = 0;
  int num_ifs = 0;
  std::vector<std::string> vars;
  std::map<std::string, int> slot;

  int slot_of(const std::string& v) {
    auto it = slot.find(v);
    if (it != slot.end()) return it->second;
    int s = static_cast<int>(vars.size());
    slot[v] = s;
    vars.push_back(v);
    return s;
  }

  void assign_expr(Expr& e) {
    if (e.kind == Expr::Kind::Binary && is_comparison(e.bin)) e.cond_id = next_cond++;
    if (e.kind == Expr::Kind::Var) e.var_slot = slot_of(e.var);
    if (e.lhs) assign_expr(*e.lhs);
    if (e.rhs) assign_expr(*e.rhs);
  }

  void assign_block(Block& b) {
    for (auto& s : b) {
      s->id = next_stmt++;
      if (s->kind == Stmt::Kind::If) ++num_ifs;
      if (s->value) assign_expr(*s->value);
      for (auto& a : s->args) assign_expr(*a);
      if (s->kind == Stmt::Kind::Read || s->kind == Stmt::Kind::Assign ||
          s->kind == Stmt::Kind::Call || s->kind == Stmt::Kind::CallFpga)
        s->var_slot = slot_of(s->var);
      assign_block(s->body);
      assign_block(s->else_body);
    }
  }
};

std::int64_t demand_block(const Block& b, const std::string& port,
                          const std::map<std::string, int>& port_channel) {
  std::int64_t total = 0;
  for (const auto& s : b) {
    switch (s->kind) {
      case Stmt::Kind::Read: {
        auto it = port_channel.find(s->port);
        if (it != port_channel.end() && it->second < 0 && s->port == port) ++total;
        break;
      }
      case Stmt::Kind::If: {
        std::int64_t t = demand_block(s->body, port, port_channel);
        std::int64_t e = demand_block(s->else_body, port, port_channel);
        total += std::max(t, e);
        break;
      }
      case Stmt::Kind::Repeat:
        total += static_cast<std::int64_t>(s->count) * demand_block(s->body, port, port_channel);
        break;
      default:
        break;
    }
  }
  return total;
}

}  // namespace

const ElaboratedProgram& CompiledModel::program(const std::string& module) const {
  auto it = module_index.find(module);
  if (it == module_index.end()) throw std::out_of_range("unknown module: " + module);
  return programs[static_cast<size_t>(it->second)];
}

const ElaboratedKernel* CompiledModel::kernel(const std::string& name) const {
  auto it = kernel_index.find(name);
  if (it == kernel_index.end()) return nullptr;
  return &kernels[static_cast<size_t>(it->second)];
}

CompiledModel compile(const SystemModel& m) {
  CompiledModel cm;
  cm.model = m.clone();

  // Kernels first, in dependency order (call graph is acyclic).
  std::map<std::string, int> state;
  std::function<void(const KernelDef&)> build = [&](const KernelDef& k) {
    if (cm.kernel_index.count(k.name)) return;
    int& st = state[k.name];
    if (st == 1) throw std::logic_error("recursive kernel: " + k.name);
    st = 1;
    for_each_stmt(k.body, [&](const Stmt& s) {
      if (s.kind == Stmt::Kind::Call) {
        const KernelDef* callee = cm.model.find_kernel(s.callee);
        if (callee) build(*callee);
      }
    });
    Inliner in{cm.kernels, cm.kernel_index};
    ElaboratedKernel ek;
    ek.name = k.name;
    ek.num_params = k.params.size();
    ek.body = in.run(k.body);
    IdAssigner ids;
    for (const auto& p : k.params) ids.slot_of(p);
    ids.assign_block(ek.body);
    ek.vars = ids.vars;
    cm.kernel_index[k.name] = static_cast<int>(cm.kernels.size());
    cm.kernels.push_back(std::move(ek));
    st = 2;
  };
  for (const auto& k : cm.model.kernels) build(k);

  for (size_t i = 0; i < cm.model.modules.size(); ++i)
    cm.module_index[cm.model.modules[i].name] = static_cast<int>(i);
  for (size_t i = 0; i < cm.model.channels.size(); ++i)
    cm.channel_index[cm.model.channels[i].name] = static_cast<int>(i);

  cm.in_port_channel.resize(cm.model.modules.size());
  cm.out_port_channel.resize(cm.model.modules.size());
  for (size_t i = 0; i < cm.model.modules.size(); ++i) {
    const ModuleDef& mod = cm.model.modules[i];
    for (const auto& p : mod.in_ports) cm.in_port_channel[i][p] = -1;
    for (const auto& p : mod.out_ports) cm.out_port_channel[i][p] = -1;
  }
  for (size_t ci = 0; ci < cm.model.channels.size(); ++ci) {
    const ChannelDef& ch = cm.model.channels[ci];
    cm.out_port_channel[static_cast<size_t>(cm.module_index.at(ch.src.module))][ch.src.port] =
        static_cast<int>(ci);
    cm.in_port_channel[static_cast<size_t>(cm.module_index.at(ch.dst.module))][ch.dst.port] =
        static_cast<int>(ci);
  }

  for (const auto& mod : cm.model.modules) {
    Inliner in{cm.kernels, cm.kernel_index};
    ElaboratedProgram ep;
    ep.owner = mod.name;
    ep.body = in.run(mod.behavior);
    // resolve effective compute cycles (manual annotation overrides inline)
    for_each_stmt_mut(ep.body, [&](Stmt& s) {
      if (s.kind != Stmt::Kind::Compute) return;
      auto it = mod.hw_annotation.find(s.label);
      if (it != mod.hw_annotation.end()) s.cycles = it->second;
    });
    IdAssigner ids;
    ids.assign_block(ep.body);
    ep.vars = ids.vars;
    ep.num_stmts = ids.next_stmt;
    ep.num_ifs = ids.num_ifs;
    ep.num_conditions = ids.next_cond;
    cm.programs.push_back(std::move(ep));
  }
  return cm;
}

std::map<std::string, std::int64_t> env_read_demand(const CompiledModel& cm) {
  std::map<std::string, std::int64_t> out;
  for (size_t i = 0; i < cm.model.modules.size(); ++i) {
    const ModuleDef& mod = cm.model.modules[i];
    for (const auto& [port, ch] : cm.in_port_channel[i]) {
      if (ch >= 0) continue;
      std::int64_t d = demand_block(cm.programs[i].body, port, cm.in_port_channel[i]);
      if (d > 0) out[mod.name + "." + port] = d;
    }
  }
  return out;
}

}  // namespace rsm
