#include "rsmkit/cfg.hpp"

#include <algorithm>

namespace rsm {
namespace {

struct Dangling {
  int node;
  CFG::EdgeLabel label;
  const Stmt* loop;  // for LoopExit
};

class Builder {
 public:
  CFG build(const Block& body) {
    cfg_.nodes.push_back({CFG::Node::Kind::Entry, nullptr});
    std::vector<Dangling> out = wire(body, {{0, CFG::EdgeLabel::Plain, nullptr}});
    int exit = add_node({CFG::Node::Kind::Exit, nullptr});
    connect(out, exit);
    return std::move(cfg_);
  }

 private:
  int add_node(CFG::Node n) {
    cfg_.nodes.push_back(n);
    return static_cast<int>(cfg_.nodes.size()) - 1;
  }

  void connect(const std::vector<Dangling>& from, int to) {
    for (const auto& d : from) {
      cfg_.edges.push_back({d.node, to, d.label, d.loop});
      if (d.label == CFG::EdgeLabel::LoopBack)
        cfg_.back_edges.push_back(static_cast<int>(cfg_.edges.size()) - 1);
    }
  }

  std::vector<Dangling> wire(const Block& b, std::vector<Dangling> incoming) {
    for (const auto& s : b) {
      switch (s->kind) {
        case Stmt::Kind::If: {
          int n = add_node({CFG::Node::Kind::Statement, s.get()});
          connect(incoming, n);
          auto then_out = wire(s->body, {{n, CFG::EdgeLabel::Then, nullptr}});
          auto else_out = wire(s->else_body, {{n, CFG::EdgeLabel::Else, nullptr}});
          incoming = std::move(then_out);
          for (auto& d : else_out) incoming.push_back(d);
          break;
        }
        case Stmt::Kind::Repeat: {
          int head = add_node({CFG::Node::Kind::Statement, s.get()});
          connect(incoming, head);
          if (s->body.empty()) {
            incoming = {{head, CFG::EdgeLabel::Plain, nullptr}};
            break;
          }
          auto body_out = wire(s->body, {{head, CFG::EdgeLabel::Plain, nullptr}});
          // back edge and loop exit both leave the body end: the literal
          // count is at least one, so the body is always entered
          std::vector<Dangling> backs;
          for (const auto& d : body_out)
            backs.push_back({d.node, CFG::EdgeLabel::LoopBack, s.get()});
          connect(backs, head);
          incoming.clear();
          for (const auto& d : body_out)
            incoming.push_back({d.node, CFG::EdgeLabel::LoopExit, s.get()});
          break;
        }
        default: {
          int n = add_node({CFG::Node::Kind::Statement, s.get()});
          connect(incoming, n);
          incoming = {{n, CFG::EdgeLabel::Plain, nullptr}};
          break;
        }
      }
    }
    return incoming;
  }

  CFG cfg_;
};

}  // namespace

std::vector<std::vector<int>> CFG::successors() const {
  std::vector<std::vector<int>> out(nodes.size());
  for (size_t i = 0; i < edges.size(); ++i)
    out[static_cast<size_t>(edges[i].from)].push_back(static_cast<int>(i));
  return out;
}

std::vector<std::vector<int>> CFG::predecessors() const {
  std::vector<std::vector<int>> out(nodes.size());
  for (size_t i = 0; i < edges.size(); ++i)
    out[static_cast<size_t>(edges[i].to)].push_back(static_cast<int>(i));
  return out;
}

CFG build_cfg(const Block& body) {
  Builder b;
  return b.build(body);
}

bool back_edges_dominated(const CFG& cfg) {
  size_t n = cfg.nodes.size();
  // iterative dominator sets (small graphs; clarity over speed)
  std::vector<std::vector<bool>> dom(n, std::vector<bool>(n, true));
  dom[0].assign(n, false);
  dom[0][0] = true;
  auto preds = cfg.predecessors();
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t v = 1; v < n; ++v) {
      std::vector<bool> acc(n, true);
      if (preds[v].empty()) {
        acc.assign(n, false);
      } else {
        for (int ei : preds[v]) {
          const auto& d = dom[static_cast<size_t>(cfg.edges[static_cast<size_t>(ei)].from)];
          for (size_t k = 0; k < n; ++k) acc[k] = acc[k] && d[k];
        }
      }
      acc[v] = true;
      if (acc != dom[v]) {
        dom[v] = std::move(acc);
        changed = true;
      }
    }
  }
  for (int ei : cfg.back_edges) {
    const CFG::Edge& e = cfg.edges[static_cast<size_t>(ei)];
    if (!dom[static_cast<size_t>(e.from)][static_cast<size_t>(e.to)]) return false;
  }
  return true;
}

}  // namespace rsm
