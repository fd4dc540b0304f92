#include "rsmkit/petri.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "rsmkit/cfg.hpp"

namespace rsm {

Marking PetriNet::initial_marking() const {
  Marking m(places.size(), 0);
  for (size_t i = 0; i < places.size(); ++i) m[i] = places[i].initial;
  return m;
}

std::vector<std::vector<Tokens>> PetriNet::incidence() const {
  std::vector<std::vector<Tokens>> c(places.size(), std::vector<Tokens>(transitions.size(), 0));
  for (size_t t = 0; t < transitions.size(); ++t) {
    for (const auto& a : transitions[t].pre)
      c[static_cast<size_t>(a.place)][t] -= a.weight;
    for (const auto& a : transitions[t].post)
      c[static_cast<size_t>(a.place)][t] += a.weight;
  }
  return c;
}

int PetriNet::find_place(const std::string& name) const {
  for (size_t i = 0; i < places.size(); ++i)
    if (places[i].name == name) return static_cast<int>(i);
  return -1;
}

int PetriNet::item_place(const std::string& channel) const {
  return find_place("item." + channel);
}

bool MarkingConstraint::satisfied(const Marking& m) const {
  for (const auto& t : terms) {
    Tokens v = m[static_cast<size_t>(t.place)];
    switch (t.op) {
      case Term::Op::Eq:
        if (v != t.value) return false;
        break;
      case Term::Op::Le:
        if (v > t.value) return false;
        break;
      case Term::Op::Ge:
        if (v < t.value) return false;
        break;
    }
  }
  return true;
}

namespace {

constexpr Tokens kBoundCap = 1000000000000LL;  // saturate nested products

Tokens sat_mul(Tokens a, Tokens b) {
  if (a <= 0 || b <= 0) return 0;
  if (a > kBoundCap / b) return kBoundCap;
  return a * b;
}

const char* stmt_tag(const Stmt* s) {
  if (!s) return "";
  switch (s->kind) {
    case Stmt::Kind::Read: return "read";
    case Stmt::Kind::Write: return "write";
    case Stmt::Kind::Assign: return "let";
    case Stmt::Kind::Compute: return "compute";
    case Stmt::Kind::Reconfigure: return "reconfigure";
    case Stmt::Kind::CallFpga: return "callfpga";
    case Stmt::Kind::If: return "if";
    case Stmt::Kind::Repeat: return "repeat";
    default: return "stmt";
  }
}

}  // namespace

PetriNet extract_net(const CompiledModel& cm) {
  PetriNet net;

  // channel item/slot places first
  std::vector<int> item_place(cm.model.channels.size(), -1);
  std::vector<int> slot_place(cm.model.channels.size(), -1);
  for (size_t c = 0; c < cm.model.channels.size(); ++c) {
    const ChannelDef& ch = cm.model.channels[c];
    item_place[c] = static_cast<int>(net.places.size());
    net.places.push_back(
        {"item." + ch.name, PetriNet::Place::Kind::Item, 0, -1, static_cast<int>(c)});
    if (ch.capacity) {
      slot_place[c] = static_cast<int>(net.places.size());
      net.places.push_back({"slot." + ch.name, PetriNet::Place::Kind::Slot, *ch.capacity, -1,
                            static_cast<int>(c)});
    }
  }

  for (size_t mi = 0; mi < cm.model.modules.size(); ++mi) {
    const ModuleDef& mod = cm.model.modules[mi];
    const ElaboratedProgram& prog = cm.programs[mi];
    CFG cfg = build_cfg(prog.body);

    PetriNet::ModuleNet mn;
    mn.name = mod.name;

    // enclosing-loop multiplier per node (structural nesting)
    std::vector<Tokens> mult(cfg.nodes.size(), 1);
    {
      std::map<const Stmt*, Tokens> stmt_mult;
      std::function<void(const Block&, Tokens)> walk = [&](const Block& b, Tokens outer) {
        for (const auto& s : b) {
          stmt_mult[s.get()] = outer;
          Tokens inner = s->kind == Stmt::Kind::Repeat ? sat_mul(outer, s->count) : outer;
          walk(s->body, inner);
          walk(s->else_body, inner);
        }
      };
      walk(prog.body, 1);
      for (size_t n = 0; n < cfg.nodes.size(); ++n)
        if (cfg.nodes[n].stmt) mult[n] = stmt_mult[cfg.nodes[n].stmt];
    }

    // control places mirror CFG nodes
    std::vector<int> node_place(cfg.nodes.size());
    for (size_t n = 0; n < cfg.nodes.size(); ++n) {
      std::string tag = cfg.nodes[n].kind == CFG::Node::Kind::Entry  ? "entry"
                        : cfg.nodes[n].kind == CFG::Node::Kind::Exit ? "exit"
                                                                     : stmt_tag(cfg.nodes[n].stmt);
      std::string name = mod.name + ".n" + std::to_string(n) + "." + tag;
      node_place[n] = static_cast<int>(net.places.size());
      net.places.push_back({name, PetriNet::Place::Kind::Control,
                            n == static_cast<size_t>(cfg.entry()) ? 1 : 0,
                            static_cast<int>(mi), -1});
    }
    mn.entry_place = node_place[static_cast<size_t>(cfg.entry())];
    mn.exit_place = node_place[static_cast<size_t>(cfg.exit())];

    // blockable nodes: channel reads, bounded-channel writes
    for (size_t n = 0; n < cfg.nodes.size(); ++n) {
      const Stmt* s = cfg.nodes[n].stmt;
      if (!s) continue;
      if (s->kind == Stmt::Kind::Read) {
        int ch = cm.in_port_channel[mi].at(s->port);
        if (ch >= 0)
          mn.blockables.push_back({node_place[n], {item_place[static_cast<size_t>(ch)]}});
      } else if (s->kind == Stmt::Kind::Write) {
        int ch = cm.out_port_channel[mi].at(s->port);
        if (ch >= 0 && slot_place[static_cast<size_t>(ch)] >= 0)
          mn.blockables.push_back({node_place[n], {slot_place[static_cast<size_t>(ch)]}});
      }
    }

    // loop bookkeeping: one LoopInfo per repeat statement of this module
    std::map<const Stmt*, size_t> loop_of;
    auto loop_idx = [&](const Stmt* loop) -> size_t {
      auto it = loop_of.find(loop);
      if (it != loop_of.end()) return it->second;
      PetriNet::LoopInfo li;
      li.count = loop->count;
      net.loops.push_back(li);
      size_t idx = net.loops.size() - 1;
      loop_of[loop] = idx;
      return idx;
    };

    // enclosing repeats per statement (outermost first) and loop head nodes
    std::map<const Stmt*, std::vector<const Stmt*>> ancestors;
    {
      std::vector<const Stmt*> stack;
      std::function<void(const Block&)> walk = [&](const Block& b) {
        for (const auto& s : b) {
          ancestors[s.get()] = stack;
          if (s->kind == Stmt::Kind::Repeat) {
            stack.push_back(s.get());
            walk(s->body);
            stack.pop_back();
          } else {
            walk(s->body);
            walk(s->else_body);
          }
        }
      };
      walk(prog.body);
    }
    auto inside = [&](const CFG::Node& n, const Stmt* loop) {
      if (n.kind != CFG::Node::Kind::Statement) return false;
      auto it = ancestors.find(n.stmt);
      if (it == ancestors.end()) return false;
      for (const Stmt* a : it->second)
        if (a == loop) return true;
      return false;
    };
    // activations of a loop = product of the counts strictly enclosing it
    auto activations = [&](const Stmt* loop) {
      Tokens acc = 1;
      for (const Stmt* a : ancestors[loop]) acc = sat_mul(acc, a->count);
      return acc;
    };
    std::vector<const Stmt*> all_loops;
    for (const auto& [stmt, _] : ancestors)
      if (stmt->kind == Stmt::Kind::Repeat) all_loops.push_back(stmt);

    // transitions follow CFG edges; the source statement's effect rides on
    // every outgoing edge. An edge can serve several loops at once (leaving
    // an inner loop is the same edge that re-enters or leaves an outer one),
    // so roles are derived from the nesting structure, not the edge label.
    for (size_t ei = 0; ei < cfg.edges.size(); ++ei) {
      const CFG::Edge& e = cfg.edges[ei];
      const CFG::Node& src = cfg.nodes[static_cast<size_t>(e.from)];
      const CFG::Node& dst = cfg.nodes[static_cast<size_t>(e.to)];
      PetriNet::Transition t;
      t.name = mod.name + ".t" + std::to_string(ei) + "." + stmt_tag(src.stmt);
      t.pre.push_back({node_place[static_cast<size_t>(e.from)], 1});
      t.post.push_back({node_place[static_cast<size_t>(e.to)], 1});
      if (src.stmt) {
        if (src.stmt->kind == Stmt::Kind::Read) {
          int ch = cm.in_port_channel[mi].at(src.stmt->port);
          if (ch >= 0) {
            t.pre.push_back({item_place[static_cast<size_t>(ch)], 1});
            if (slot_place[static_cast<size_t>(ch)] >= 0)
              t.post.push_back({slot_place[static_cast<size_t>(ch)], 1});
          }
        } else if (src.stmt->kind == Stmt::Kind::Write) {
          int ch = cm.out_port_channel[mi].at(src.stmt->port);
          if (ch >= 0) {
            t.post.push_back({item_place[static_cast<size_t>(ch)], 1});
            if (slot_place[static_cast<size_t>(ch)] >= 0)
              t.pre.push_back({slot_place[static_cast<size_t>(ch)], 1});
          }
        }
      }

      Tokens bound = mult[static_cast<size_t>(e.from)];
      if (src.stmt && src.stmt->kind == Stmt::Kind::Repeat)
        bound = sat_mul(src.stmt->count, bound);  // head into body: once per iteration

      int ti = static_cast<int>(net.transitions.size());
      std::vector<std::pair<size_t, int>> roles;  // loop index, 0=enter 1=back 2=exit
      for (const Stmt* loop : all_loops) {
        bool src_in = inside(src, loop) || src.stmt == loop;
        bool dst_in = inside(dst, loop) || dst.stmt == loop;
        if (dst.stmt == loop) {
          // edge into the loop head
          if (inside(src, loop))
            roles.push_back({loop_idx(loop), 1});  // back
          else
            roles.push_back({loop_idx(loop), 0});  // enter
        } else if (src_in && !dst_in && src.stmt != loop) {
          roles.push_back({loop_idx(loop), 2});  // exit
        }
      }
      for (auto [li, role] : roles) {
        const Stmt* loop = nullptr;
        for (const auto& [stmt, idx] : loop_of)
          if (idx == li) loop = stmt;
        if (role == 0) net.loops[li].enter_ts.push_back(ti);
        if (role == 1) {
          net.loops[li].back_ts.push_back(ti);
          bound = std::min(bound, sat_mul(loop->count - 1, activations(loop)));
        }
        if (role == 2) {
          net.loops[li].exit_ts.push_back(ti);
          bound = std::min(bound, activations(loop));
        }
      }
      t.upper_bound = bound;
      net.transitions.push_back(std::move(t));
    }

    net.modules.push_back(std::move(mn));
  }
  return net;
}

std::vector<MarkingConstraint> deadlock_targets(const PetriNet& net, std::uint64_t cap) {
  std::uint64_t candidates = 1;
  bool saturated = false;
  for (const auto& mn : net.modules) {
    std::uint64_t options = mn.blockables.size() + 1;
    if (candidates > (cap + 1) / options + 1) {
      saturated = true;
      break;
    }
    candidates *= options;
  }
  if (!saturated && candidates > 0) candidates -= 1;  // all-terminal excluded
  if (saturated || candidates > cap)
    throw CombinatorialLimitError(saturated ? cap + 1 : candidates, cap);

  std::vector<MarkingConstraint> out;
  if (net.modules.empty()) return out;
  std::vector<size_t> pick(net.modules.size(), 0);  // 0 = exit, i+1 = blockable i
  for (;;) {
    bool all_exit = true;
    for (size_t m = 0; m < pick.size(); ++m)
      if (pick[m] != 0) all_exit = false;
    if (!all_exit) {
      MarkingConstraint c;
      std::ostringstream desc;
      std::map<int, Tokens> zero;
      for (size_t m = 0; m < pick.size(); ++m) {
        const auto& mn = net.modules[m];
        if (pick[m] == 0) {
          c.terms.push_back({mn.exit_place, MarkingConstraint::Term::Op::Eq, 1});
          desc << mn.name << "=done ";
        } else {
          const auto& bi = mn.blockables[pick[m] - 1];
          c.terms.push_back({bi.control_place, MarkingConstraint::Term::Op::Eq, 1});
          for (int z : bi.zero_places) zero[z] = 0;
          desc << mn.name << "@" << net.places[static_cast<size_t>(bi.control_place)].name
               << " ";
        }
      }
      for (const auto& [p, v] : zero)
        c.terms.push_back({p, MarkingConstraint::Term::Op::Eq, v});
      c.description = desc.str();
      out.push_back(std::move(c));
    }
    // odometer
    size_t m = 0;
    for (; m < pick.size(); ++m) {
      if (pick[m] < net.modules[m].blockables.size()) {
        ++pick[m];
        break;
      }
      pick[m] = 0;
    }
    if (m == pick.size()) break;
  }
  return out;
}

namespace {

struct StateKey {
  std::vector<Tokens> v;  // marking followed by loop counters
  bool operator==(const StateKey& o) const { return v == o.v; }
};

struct StateKeyHash {
  size_t operator()(const StateKey& k) const {
    size_t h = 1469598103934665603ull;
    for (Tokens t : k.v) {
      h ^= static_cast<size_t>(t) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace

std::optional<FiringSequence> find_witness(const PetriNet& net, const MarkingConstraint& target,
                                           std::int64_t state_cap) {
  const size_t np = net.places.size();
  const size_t nl = net.loops.size();

  std::vector<std::vector<int>> backs_of(net.transitions.size()), exits_of(net.transitions.size()),
      enters_of(net.transitions.size());
  for (size_t l = 0; l < nl; ++l) {
    for (int t : net.loops[l].back_ts) backs_of[static_cast<size_t>(t)].push_back(static_cast<int>(l));
    for (int t : net.loops[l].exit_ts) exits_of[static_cast<size_t>(t)].push_back(static_cast<int>(l));
    for (int t : net.loops[l].enter_ts) enters_of[static_cast<size_t>(t)].push_back(static_cast<int>(l));
  }

  // aggregate arc weights per place (an arc list may repeat a place)
  std::vector<std::vector<std::pair<int, Tokens>>> need(net.transitions.size()),
      delta(net.transitions.size());
  for (size_t t = 0; t < net.transitions.size(); ++t) {
    std::map<int, Tokens> pre, d;
    for (const auto& a : net.transitions[t].pre) {
      pre[a.place] += a.weight;
      d[a.place] -= a.weight;
    }
    for (const auto& a : net.transitions[t].post) d[a.place] += a.weight;
    for (const auto& [p, w] : pre) need[t].push_back({p, w});
    for (const auto& [p, w] : d)
      if (w != 0) delta[t].push_back({p, w});
  }

  StateKey init;
  init.v = net.initial_marking();
  init.v.resize(np + nl, 0);

  Marking m0view(init.v.begin(), init.v.begin() + static_cast<std::ptrdiff_t>(np));
  if (target.satisfied(m0view)) return FiringSequence{};

  // state -> (parent order index, firing transition)
  std::unordered_map<StateKey, std::pair<int, int>, StateKeyHash> parent;
  std::vector<StateKey> order;
  parent[init] = {-1, -1};
  order.push_back(init);
  std::queue<int> work;
  work.push(0);

  while (!work.empty()) {
    int cur = work.front();
    work.pop();
    StateKey state = order[static_cast<size_t>(cur)];
    for (size_t ti = 0; ti < net.transitions.size(); ++ti) {
      bool enabled = true;
      for (const auto& [p, w] : need[ti])
        if (state.v[static_cast<size_t>(p)] < w) enabled = false;
      if (!enabled) continue;
      // bounded-loop semantics: a back edge fires only before the last
      // iteration, an exit edge only on it
      bool counter_ok = true;
      for (int l : backs_of[ti])
        if (state.v[np + static_cast<size_t>(l)] >= net.loops[static_cast<size_t>(l)].count - 1)
          counter_ok = false;
      for (int l : exits_of[ti])
        if (state.v[np + static_cast<size_t>(l)] != net.loops[static_cast<size_t>(l)].count - 1)
          counter_ok = false;
      if (!counter_ok) continue;

      StateKey next = state;
      for (const auto& [p, w] : delta[ti]) next.v[static_cast<size_t>(p)] += w;
      for (int l : backs_of[ti]) next.v[np + static_cast<size_t>(l)] += 1;
      for (int l : exits_of[ti]) next.v[np + static_cast<size_t>(l)] = 0;
      for (int l : enters_of[ti]) next.v[np + static_cast<size_t>(l)] = 0;

      if (parent.count(next)) continue;
      parent[next] = {cur, static_cast<int>(ti)};
      Marking mview(next.v.begin(), next.v.begin() + static_cast<std::ptrdiff_t>(np));
      if (target.satisfied(mview)) {
        FiringSequence seq;
        seq.transitions.push_back(static_cast<int>(ti));
        int prev = cur;
        while (prev > 0) {
          auto [p, tr] = parent[order[static_cast<size_t>(prev)]];
          seq.transitions.push_back(tr);
          prev = p;
        }
        std::reverse(seq.transitions.begin(), seq.transitions.end());
        return seq;
      }
      if (static_cast<std::int64_t>(order.size()) >= state_cap) return std::nullopt;
      order.push_back(next);
      work.push(static_cast<int>(order.size()) - 1);
    }
  }
  return std::nullopt;
}

std::string export_net(const PetriNet& net) {
  std::ostringstream os;
  for (const auto& p : net.places) os << "place " << p.name << " " << p.initial << "\n";
  for (const auto& t : net.transitions) {
    os << "trans " << t.name << " |";
    for (const auto& a : t.pre) {
      os << " " << net.places[static_cast<size_t>(a.place)].name;
      if (a.weight != 1) os << "*" << a.weight;
    }
    os << " |";
    for (const auto& a : t.post) {
      os << " " << net.places[static_cast<size_t>(a.place)].name;
      if (a.weight != 1) os << "*" << a.weight;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace rsm
