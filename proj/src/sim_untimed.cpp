#include <deque>

#include "rsmkit/sim.hpp"

namespace rsm {

std::map<std::string, std::vector<Value>> Trace::by_channel() const {
  std::map<std::string, std::vector<Value>> out;
  for (const auto& r : records) out[r.channel].push_back(r.value);
  return out;
}

std::map<std::string, std::vector<Cycle>> Trace::cycles_by_channel() const {
  std::map<std::string, std::vector<Cycle>> out;
  if (commit_cycles.size() != records.size()) return out;
  for (size_t i = 0; i < records.size(); ++i)
    out[records[i].channel].push_back(commit_cycles[i]);
  return out;
}

std::optional<Divergence> compare_traces(const Trace& a, const Trace& b) {
  auto ca = a.by_channel();
  auto cb = b.by_channel();
  std::map<std::string, bool> names;
  for (const auto& [n, _] : ca) names[n] = true;
  for (const auto& [n, _] : cb) names[n] = true;
  for (const auto& [name, _] : names) {
    static const std::vector<Value> kEmpty;
    auto ita = ca.find(name);
    auto itb = cb.find(name);
    const std::vector<Value>& va = ita == ca.end() ? kEmpty : ita->second;
    const std::vector<Value>& vb = itb == cb.end() ? kEmpty : itb->second;
    size_t n = std::min(va.size(), vb.size());
    for (size_t i = 0; i < n; ++i) {
      if (va[i] != vb[i])
        return Divergence{name, static_cast<std::int64_t>(i), va[i], vb[i]};
    }
    if (va.size() != vb.size()) {
      Divergence d;
      d.channel = name;
      d.index = static_cast<std::int64_t>(n);
      if (n < va.size()) d.value_a = va[n];
      if (n < vb.size()) d.value_b = vb[n];
      return d;
    }
  }
  return std::nullopt;
}

namespace {

struct UntimedHost {
  const CompiledModel& cm;
  const Stimulus& stim;
  Trace trace;

  std::vector<std::deque<Value>> channels;           // by channel index
  std::map<std::string, std::int64_t> seq;           // per trace channel
  std::map<std::string, size_t> env_cursor;          // per "MODULE.port"

  explicit UntimedHost(const CompiledModel& c, const Stimulus& s)
      : cm(c), stim(s), channels(c.model.channels.size()) {}

  void record(const std::string& channel, Value v) {
    trace.records.push_back({channel, seq[channel]++, v});
  }
};

}  // namespace

Trace simulate_untimed(const CompiledModel& cm, const Stimulus& stim,
                       std::vector<ExecHooks>* hooks) {
  UntimedHost host(cm, stim);
  std::vector<ModuleMachine> machines;
  machines.reserve(cm.programs.size());
  for (const auto& p : cm.programs) machines.emplace_back(&p);

  auto hook_for = [&](size_t i) -> ExecHooks* {
    if (!hooks) return nullptr;
    return &(*hooks)[i];
  };

  auto mark_stmt = [&](size_t i, const Stmt* s) {
    ExecHooks* h = hook_for(i);
    if (h && h->stmt_hit) (*h->stmt_hit)[static_cast<size_t>(s->id)] = 1;
  };

  // Runs module i until it blocks on an empty read or terminates.
  // Returns true if it executed at least one statement.
  auto run_module = [&](size_t i) -> bool {
    ModuleMachine& mm = machines[i];
    const ModuleDef& mod = cm.model.modules[i];
    bool progressed = false;
    for (;;) {
      const Stmt* s = mm.peek();
      if (!s) return progressed;
      switch (s->kind) {
        case Stmt::Kind::Read: {
          int ch = cm.in_port_channel[i].at(s->port);
          if (ch >= 0) {
            auto& q = host.channels[static_cast<size_t>(ch)];
            if (q.empty()) return progressed;  // blocked
            Value v = q.front();
            q.pop_front();
            mark_stmt(i, s);
            mm.set_var(s->var_slot, v);
            mm.advance();
          } else {
            std::string key = mod.name + "." + s->port;
            size_t& cur = host.env_cursor[key];
            auto it = host.stim.inputs.find(key);
            size_t avail = it == host.stim.inputs.end() ? 0 : it->second.size();
            if (cur >= avail) return progressed;  // stimulus exhausted: blocked
            mark_stmt(i, s);
            mm.set_var(s->var_slot, it->second[cur++]);
            mm.advance();
          }
          break;
        }
        case Stmt::Kind::Write: {
          mark_stmt(i, s);
          Value v = mm.eval(*s->value, hook_for(i), mod.name);
          int ch = cm.out_port_channel[i].at(s->port);
          if (ch >= 0) {
            host.channels[static_cast<size_t>(ch)].push_back(v);
            host.record(cm.model.channels[static_cast<size_t>(ch)].name, v);
          } else {
            host.record(mod.name + "." + s->port, v);
          }
          mm.advance();
          break;
        }
        case Stmt::Kind::Assign: {
          mark_stmt(i, s);
          Value v = mm.eval(*s->value, hook_for(i), mod.name);
          mm.set_var(s->var_slot, v);
          mm.advance();
          break;
        }
        case Stmt::Kind::Compute:
          mark_stmt(i, s);
          mm.advance();
          break;
        case Stmt::Kind::Reconfigure:
          mark_stmt(i, s);
          mm.advance();  // functional no-op at level 1
          break;
        case Stmt::Kind::CallFpga: {
          mark_stmt(i, s);
          auto args = mm.eval_args(*s, hook_for(i), mod.name);
          const ElaboratedKernel* k = cm.kernel(s->callee);
          Value v = eval_kernel(*k, args, mod.name, s->pos);
          mm.set_var(s->var_slot, v);
          mm.advance();
          break;
        }
        case Stmt::Kind::If:
          mark_stmt(i, s);
          mm.exec_if(hook_for(i), mod.name);
          break;
        case Stmt::Kind::Repeat:
          mark_stmt(i, s);
          mm.exec_repeat();
          break;
        case Stmt::Kind::Call:
        case Stmt::Kind::Return:
          // removed by elaboration / rejected by validation
          mm.advance();
          break;
      }
      progressed = true;
    }
  };

  for (;;) {
    bool any_progress = false;
    bool all_done = true;
    for (size_t i = 0; i < machines.size(); ++i) {
      if (machines[i].done()) continue;
      if (run_module(i)) any_progress = true;
      if (!machines[i].done()) all_done = false;
    }
    if (all_done) break;
    if (!any_progress) {
      host.trace.deadlocked = true;
      break;
    }
  }
  return std::move(host.trace);
}

}  // namespace rsm
