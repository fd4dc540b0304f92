#include "doctest.h"
#include "rsmkit/cfg.hpp"
#include "rsmkit/elaborate.hpp"
#include "support/fixtures.hpp"

using namespace rsm;

namespace {

// Independent structural oracle: node count = statements + 2; edge count by
// structural recursion (seq chains, if diamonds re-merging at the join, a
// repeat body with one back edge per body end).
struct Structural {
  int stmts = 0;

  void count(const Block& b) {
    for (const auto& s : b) {
      ++stmts;
      count(s->body);
      count(s->else_body);
    }
  }
};

Block body_of(const std::string& src, const std::string& module = "M") {
  CompiledModel cm = rsmtest::compile_src(src);
  return clone_block(cm.program(module).body);
}

}  // namespace

TEST_CASE("three straight-line statements: 5 nodes, 4 edges") {
  Block b = body_of(R"(
system s {
  module M {
    port out o
    behavior {
      let a = 1
      let b = a + 1
      write o b
    }
  }
}
)");
  CFG g = build_cfg(b);
  CHECK(g.nodes.size() == 5);
  CHECK(g.edges.size() == 4);
  CHECK(g.back_edges.empty());
}

TEST_CASE("if diamond with one-statement arms: 5 nodes, join folded into exit") {
  Block b = body_of(R"(
system s {
  module M {
    port in i
    port out o
    behavior {
      read i x
      if (x > 0) {
        write o 1
      } else {
        write o 2
      }
    }
  }
}
)");
  // drop the leading read to isolate the diamond
  Block diamond;
  diamond.push_back(b[1]->clone());
  CFG g = build_cfg(diamond);
  // entry, cond, then, else, exit; structural recursion: 1 edge into the
  // condition, 2 arm edges, 2 join edges
  CHECK(g.nodes.size() == 5);
  CHECK(g.edges.size() == 5);
  Structural st;
  st.count(diamond);
  CHECK(g.nodes.size() == static_cast<size_t>(st.stmts) + 2);
}

TEST_CASE("repeat(3, compute): 4 nodes, one back edge") {
  Block b = body_of(R"(
system s {
  module M {
    behavior {
      repeat 3 {
        compute step 1
      }
    }
  }
}
)");
  CFG g = build_cfg(b);
  CHECK(g.nodes.size() == 4);  // entry, loop head, compute, exit
  CHECK(g.back_edges.size() == 1);
  const CFG::Edge& back = g.edges[static_cast<size_t>(g.back_edges[0])];
  CHECK(g.nodes[static_cast<size_t>(back.to)].stmt->kind == Stmt::Kind::Repeat);
  CHECK(g.nodes[static_cast<size_t>(back.from)].stmt->kind == Stmt::Kind::Compute);
}

TEST_CASE("node count equals statement count plus two on nested programs") {
  const char* src = R"(
system s {
  module M {
    port in i
    port out o
    behavior {
      read i x
      repeat 4 {
        let y = x * 2
        if (y > 4) {
          write o y
        } else {
          let y = y + 1
          write o y
        }
      }
      write o 0
    }
  }
}
)";
  Block b = body_of(src);
  CFG g = build_cfg(b);
  Structural st;
  st.count(b);
  CHECK(g.nodes.size() == static_cast<size_t>(st.stmts) + 2);
}

TEST_CASE("every node reachable from entry; exit reachable from every node") {
  Block b = body_of(R"(
system s {
  module M {
    port in i
    port out o
    behavior {
      read i x
      repeat 2 {
        if (x > 0) {
          let x = x - 1
        } else {
          write o x
        }
      }
    }
  }
}
)");
  CFG g = build_cfg(b);
  auto succ = g.successors();
  std::vector<bool> fwd(g.nodes.size(), false);
  std::vector<int> work{g.entry()};
  fwd[0] = true;
  while (!work.empty()) {
    int n = work.back();
    work.pop_back();
    for (int ei : succ[static_cast<size_t>(n)]) {
      int to = g.edges[static_cast<size_t>(ei)].to;
      if (!fwd[static_cast<size_t>(to)]) {
        fwd[static_cast<size_t>(to)] = true;
        work.push_back(to);
      }
    }
  }
  for (bool r : fwd) CHECK(r);

  auto pred = g.predecessors();
  std::vector<bool> bwd(g.nodes.size(), false);
  work = {g.exit()};
  bwd[static_cast<size_t>(g.exit())] = true;
  while (!work.empty()) {
    int n = work.back();
    work.pop_back();
    for (int ei : pred[static_cast<size_t>(n)]) {
      int from = g.edges[static_cast<size_t>(ei)].from;
      if (!bwd[static_cast<size_t>(from)]) {
        bwd[static_cast<size_t>(from)] = true;
        work.push_back(from);
      }
    }
  }
  for (bool r : bwd) CHECK(r);
}

TEST_CASE("back edges target dominators (reducible)") {
  Block b = body_of(R"(
system s {
  module M {
    behavior {
      repeat 2 {
        repeat 3 {
          compute a 1
        }
        compute b 2
      }
    }
  }
}
)");
  CFG g = build_cfg(b);
  CHECK(back_edges_dominated(g));
  CHECK(g.back_edges.size() == 2);
}

TEST_CASE("build_cfg is deterministic") {
  Block b = body_of(rsmtest::kLevel3Task, "SWT");
  CFG g1 = build_cfg(b);
  CFG g2 = build_cfg(b);
  REQUIRE(g1.nodes.size() == g2.nodes.size());
  REQUIRE(g1.edges.size() == g2.edges.size());
  for (size_t i = 0; i < g1.edges.size(); ++i) {
    CHECK(g1.edges[i].from == g2.edges[i].from);
    CHECK(g1.edges[i].to == g2.edges[i].to);
  }
}

TEST_CASE("repeat 1 elaborates to its body") {
  Block b = body_of(R"(
system s {
  module M {
    port out o
    behavior {
      repeat 1 {
        write o 1
      }
    }
  }
}
)");
  CFG g = build_cfg(b);
  CHECK(g.nodes.size() == 3);  // entry, write, exit
  CHECK(g.back_edges.empty());
}
