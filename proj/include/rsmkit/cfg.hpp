#pragma once

#include <string>
#include <vector>

#include "rsmkit/ast.hpp"

namespace rsm {

/// Statement-level control-flow graph with unique entry and exit nodes.
/// A repeat statement contributes a loop-head node; its back and exit edges
/// leave the body end (the count is a positive literal, so the body always
/// runs).
struct CFG {
  enum class EdgeLabel { Plain, Then, Else, LoopBack, LoopExit };

  struct Node {
    enum class Kind { Entry, Exit, Statement } kind = Kind::Statement;
    const Stmt* stmt = nullptr;  // null for entry/exit
  };

  struct Edge {
    int from = 0;
    int to = 0;
    EdgeLabel label = EdgeLabel::Plain;
    const Stmt* loop = nullptr;  // owning repeat for LoopBack/LoopExit
  };

  std::vector<Node> nodes;  // 0 = entry, last = exit
  std::vector<Edge> edges;
  std::vector<int> back_edges;  // indices into edges

  int entry() const { return 0; }
  int exit() const { return static_cast<int>(nodes.size()) - 1; }
  std::vector<std::vector<int>> successors() const;   // node -> edge indices
  std::vector<std::vector<int>> predecessors() const; // node -> edge indices
};

/// One node per primitive statement plus entry/exit.
CFG build_cfg(const Block& body);

/// Immediate dominator-based check that every back edge targets a node
/// dominating its source (reducibility; structured syntax guarantees it).
bool back_edges_dominated(const CFG& cfg);

}  // namespace rsm
