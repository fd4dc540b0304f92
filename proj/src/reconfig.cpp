#include "rsmkit/reconfig.hpp"

#include <deque>
#include <map>
#include <random>

#include "rsmkit/validate.hpp"

namespace rsm {
namespace {

// Constant-fold an expression with no variables. Returns nullopt when the
// value depends on data or the fold traps.
std::optional<Value> const_fold(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::IntLit:
      return e.literal;
    case Expr::Kind::Var:
      return std::nullopt;
    case Expr::Kind::Unary: {
      auto v = const_fold(*e.lhs);
      if (!v) return std::nullopt;
      return e.un == UnOp::Neg ? wrap_neg(*v) : static_cast<Value>(*v == 0 ? 1 : 0);
    }
    case Expr::Kind::Binary: {
      auto a = const_fold(*e.lhs);
      if (!a) return std::nullopt;
      if (e.bin == BinOp::And && *a == 0) return 0;
      if (e.bin == BinOp::Or && *a != 0) return 1;
      auto b = const_fold(*e.rhs);
      if (!b) return std::nullopt;
      switch (e.bin) {
        case BinOp::Add: return wrap_add(*a, *b);
        case BinOp::Sub: return wrap_sub(*a, *b);
        case BinOp::Mul: return wrap_mul(*a, *b);
        case BinOp::Div:
          if (*b == 0) return std::nullopt;
          return *a / *b;
        case BinOp::Eq: return *a == *b;
        case BinOp::Ne: return *a != *b;
        case BinOp::Lt: return *a < *b;
        case BinOp::Le: return *a <= *b;
        case BinOp::Gt: return *a > *b;
        case BinOp::Ge: return *a >= *b;
        case BinOp::And: return (*a != 0 && *b != 0) ? 1 : 0;
        case BinOp::Or: return (*a != 0 || *b != 0) ? 1 : 0;
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

Verdict analyze(const CFG& cfg, const std::vector<ContextDef>& contexts,
                const std::optional<std::string>& initial) {
  const int num_nodes = static_cast<int>(cfg.nodes.size());
  const int K = static_cast<int>(contexts.size());  // context K = NONE
  std::map<std::string, int> ctx_index;
  for (int i = 0; i < K; ++i) ctx_index[contexts[static_cast<size_t>(i)].name] = i;

  auto ctx_name = [&](int c) -> std::string {
    return c == K ? std::string() : contexts[static_cast<size_t>(c)].name;
  };
  auto ctx_has_fn = [&](int c, const std::string& fn) {
    if (c == K) return false;  // nothing loaded
    return contexts[static_cast<size_t>(c)].find_fn(fn) != nullptr;
  };

  int init = K;
  if (initial) {
    auto it = ctx_index.find(*initial);
    if (it != ctx_index.end()) init = it->second;
  }

  auto succs = cfg.successors();
  auto state_id = [&](int node, int ctx) { return node * (K + 1) + ctx; };
  std::vector<int> parent_edge(static_cast<size_t>(num_nodes) * (K + 1), -2);  // -2 unseen
  std::vector<int> discovery(static_cast<size_t>(num_nodes) * (K + 1), -1);
  int discovered = 0;
  std::deque<int> work;

  Verdict v;
  v.node_states.assign(static_cast<size_t>(num_nodes), {});

  int start = state_id(cfg.entry(), init);
  parent_edge[static_cast<size_t>(start)] = -1;
  discovery[static_cast<size_t>(start)] = discovered++;
  work.push_back(start);
  v.node_states[static_cast<size_t>(cfg.entry())].insert(ctx_name(init));
  int processed = 0;

  while (!work.empty()) {
    int st = work.front();
    work.pop_front();
    ++processed;
    int node = st / (K + 1);
    int ctx = st % (K + 1);
    const CFG::Node& n = cfg.nodes[static_cast<size_t>(node)];
    // transfer: executing this node's statement on the way out
    int out_ctx = ctx;
    if (n.kind == CFG::Node::Kind::Statement && n.stmt->kind == Stmt::Kind::Reconfigure) {
      auto it = ctx_index.find(n.stmt->context);
      if (it != ctx_index.end()) out_ctx = it->second;
    }
    for (int ei : succs[static_cast<size_t>(node)]) {
      int to = cfg.edges[static_cast<size_t>(ei)].to;
      int nst = state_id(to, out_ctx);
      if (parent_edge[static_cast<size_t>(nst)] != -2) continue;
      parent_edge[static_cast<size_t>(nst)] = ei;
      discovery[static_cast<size_t>(nst)] = discovered++;
      v.node_states[static_cast<size_t>(to)].insert(ctx_name(out_ctx));
      work.push_back(nst);
    }
  }
  v.iterations = processed;

  // offending call: lowest node id, contexts in declaration order, NONE last
  for (int node = 0; node < num_nodes && v.kind == Verdict::Kind::Certificate; ++node) {
    const CFG::Node& n = cfg.nodes[static_cast<size_t>(node)];
    if (n.kind != CFG::Node::Kind::Statement || n.stmt->kind != Stmt::Kind::CallFpga) continue;
    const std::string& fn = n.stmt->callee;
    int bad_ctx = -1;
    for (int c = 0; c <= K; ++c) {
      if (parent_edge[static_cast<size_t>(state_id(node, c))] == -2) continue;  // unreachable
      if (!ctx_has_fn(c, fn)) {
        if (bad_ctx < 0) bad_ctx = c;
        v.missing_in.insert(ctx_name(c));
      }
    }
    if (bad_ctx < 0) continue;
    v.kind = Verdict::Kind::Counterexample;
    v.offending_fn = fn;
    v.offending_node = node;
    v.offending_pos = n.stmt->pos;
    v.offending_context = ctx_name(bad_ctx);

    // reconstruct the entry-to-call path along recorded predecessors
    std::vector<int> path_edges;
    int st = state_id(node, bad_ctx);
    while (parent_edge[static_cast<size_t>(st)] >= 0) {
      int ei = parent_edge[static_cast<size_t>(st)];
      path_edges.push_back(ei);
      const CFG::Edge& e = cfg.edges[static_cast<size_t>(ei)];
      int from_ctx;
      // invert the transfer: the source state's context before this edge
      const CFG::Node& src = cfg.nodes[static_cast<size_t>(e.from)];
      if (src.kind == CFG::Node::Kind::Statement &&
          src.stmt->kind == Stmt::Kind::Reconfigure) {
        // the reconfigure overwrites the incoming context, so any reachable
        // predecessor state works; the earliest-discovered one keeps the
        // walk strictly decreasing in discovery order
        from_ctx = -1;
        int best = -1;
        for (int c = 0; c <= K; ++c) {
          int cand = state_id(e.from, c);
          if (parent_edge[static_cast<size_t>(cand)] == -2) continue;
          if (best < 0 || discovery[static_cast<size_t>(cand)] < best) {
            best = discovery[static_cast<size_t>(cand)];
            from_ctx = c;
          }
        }
      } else {
        from_ctx = st % (K + 1);
      }
      st = state_id(e.from, from_ctx);
    }
    std::reverse(path_edges.begin(), path_edges.end());
    v.path.push_back(cfg.entry());
    for (int ei : path_edges) v.path.push_back(cfg.edges[static_cast<size_t>(ei)].to);

    // feasibility marking: data-dependent branches or loop-count-inconsistent
    // edge usage make the path a syntactic candidate only
    std::map<const Stmt*, Value> backs;
    for (int ei : path_edges) {
      const CFG::Edge& e = cfg.edges[static_cast<size_t>(ei)];
      if (e.label == CFG::EdgeLabel::Then || e.label == CFG::EdgeLabel::Else) {
        const CFG::Node& src = cfg.nodes[static_cast<size_t>(e.from)];
        auto c = const_fold(*src.stmt->value);
        if (!c) {
          v.may_be_infeasible = true;
        } else if ((e.label == CFG::EdgeLabel::Then) != (*c != 0)) {
          v.may_be_infeasible = true;  // constant guard contradicts the arm
        }
      } else if (e.label == CFG::EdgeLabel::LoopBack) {
        backs[e.loop] += 1;
      } else if (e.label == CFG::EdgeLabel::LoopExit) {
        if (backs[e.loop] != e.loop->count - 1) v.may_be_infeasible = true;
        backs[e.loop] = 0;
      }
      const CFG::Node& to = cfg.nodes[static_cast<size_t>(e.to)];
      if (to.kind == CFG::Node::Kind::Statement && to.stmt->kind == Stmt::Kind::Repeat &&
          e.label != CFG::EdgeLabel::LoopBack)
        backs[to.stmt] = 0;
    }
    // a path that stops inside a loop body never sees the exit edge; any
    // pending partial iteration is fine (the call happens mid-iteration)
  }
  return v;
}

ModelVerdict analyze_model(const CompiledModel& cm) {
  ModelVerdict mv;
  auto tasks = fabric_task_modules(cm.model);
  if (tasks.empty()) {
    CFG empty = build_cfg({});
    mv.verdict = analyze(empty, cm.model.contexts, cm.model.initial_context);
    return mv;
  }
  mv.task_module = tasks.front();
  CFG cfg = build_cfg(cm.program(mv.task_module).body);
  mv.verdict = analyze(cfg, cm.model.contexts, cm.model.initial_context);
  return mv;
}

ReplayOutcome replay_counterexample(const CompiledModel& cm, const Verdict& verdict,
                                    std::uint64_t seed, int budget) {
  ReplayOutcome out;
  if (verdict.kind != Verdict::Kind::Counterexample) return out;
  auto demand = env_read_demand(cm);
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < budget; ++attempt) {
    out.attempts = attempt + 1;
    Stimulus stim;
    stim.seed = seed;
    for (const auto& [port, n] : demand) {
      auto& vals = stim.inputs[port];
      vals.reserve(static_cast<size_t>(n));
      for (std::int64_t i = 0; i < n; ++i) {
        // bias toward small values so comparisons against small constants
        // exercise both arms
        std::uint64_t r = rng();
        Value v = (r & 1u) ? static_cast<Value>((r >> 1) % 2)
                           : static_cast<Value>((r >> 1) % 1024);
        vals.push_back(v);
      }
    }
    try {
      simulate_timed(cm, stim, 3);
    } catch (const ReconfigViolation& rv) {
      if (rv.fn == verdict.offending_fn && rv.pos.line == verdict.offending_pos.line &&
          rv.pos.col == verdict.offending_pos.col) {
        out.kind = ReplayOutcome::Kind::Confirmed;
        out.witness = std::move(stim);
        return out;
      }
    } catch (const RuntimeTrap&) {
      // a trapped run says nothing about the counterexample
    }
  }
  return out;
}

}  // namespace rsm
