#pragma once
#include "rsmkit/petri.hpp"

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "rsmkit/model.hpp"

namespace rsmtest {

// Random structured control programs over reconfigure/callfpga/if/repeat,
// used to drive the consistency checker against the path-enumeration oracle.
struct ProgramGenerator {
  std::mt19937_64 rng;
  int max_nodes = 12;
  int num_contexts = 0;
  int num_functions = 0;
  bool allow_loops = false;
  std::vector<rsm::ContextDef> contexts;
  std::optional<std::string> initial;

  explicit ProgramGenerator(std::uint64_t seed) : rng(seed) {}

  void roll_config() {
    num_contexts = 1 + static_cast<int>(rng() % 3);   // up to 3 contexts
    num_functions = 1 + static_cast<int>(rng() % 4);  // up to 4 functions
    contexts.clear();
    for (int c = 0; c < num_contexts; ++c) {
      rsm::ContextDef ctx;
      ctx.name = "cfg" + std::to_string(c);
      ctx.bitstream_words = 1 + static_cast<rsm::Value>(rng() % 64);
      for (int f = 0; f < num_functions; ++f)
        if (rng() % 2) ctx.functions.push_back({"fn" + std::to_string(f), 1});
      contexts.push_back(std::move(ctx));
    }
    if (rng() % 2)
      initial = contexts[rng() % contexts.size()].name;
    else
      initial.reset();
  }

  rsm::Block gen_program() {
    int budget = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_nodes));
    return gen_block(budget, 0);
  }

 private:
  rsm::StmtPtr mk(rsm::Stmt::Kind k) {
    auto s = std::make_unique<rsm::Stmt>();
    s->kind = k;
    s->pos = {1, 1};
    return s;
  }

  rsm::ExprPtr var_expr() {
    auto e = std::make_unique<rsm::Expr>();
    e->kind = rsm::Expr::Kind::Var;
    e->var = "x";
    e->var_slot = 0;
    return e;
  }

  rsm::ExprPtr lit_expr(rsm::Value v) {
    auto e = std::make_unique<rsm::Expr>();
    e->kind = rsm::Expr::Kind::IntLit;
    e->literal = v;
    return e;
  }

  rsm::Block gen_block(int budget, int depth) {
    rsm::Block b;
    while (budget > 0) {
      unsigned pick = rng() % 10;
      if (pick < 3) {
        auto s = mk(rsm::Stmt::Kind::Reconfigure);
        s->context = contexts[rng() % contexts.size()].name;
        b.push_back(std::move(s));
        budget -= 1;
      } else if (pick < 6) {
        auto s = mk(rsm::Stmt::Kind::CallFpga);
        s->callee = "fn" + std::to_string(rng() % static_cast<unsigned>(num_functions));
        s->var = "x";
        s->var_slot = 0;
        b.push_back(std::move(s));
        budget -= 1;
      } else if (pick < 9 && depth < 3 && budget >= 3) {
        auto s = mk(rsm::Stmt::Kind::If);
        // data-dependent or constant guard; both matter for path feasibility
        if (rng() % 2) {
          auto cmp = std::make_unique<rsm::Expr>();
          cmp->kind = rsm::Expr::Kind::Binary;
          cmp->bin = rsm::BinOp::Gt;
          cmp->lhs = var_expr();
          cmp->rhs = lit_expr(static_cast<rsm::Value>(rng() % 4));
          s->value = std::move(cmp);
        } else {
          s->value = lit_expr(static_cast<rsm::Value>(rng() % 2));
        }
        int half = budget / 2;
        s->body = gen_block(1 + static_cast<int>(rng() % static_cast<unsigned>(half)), depth + 1);
        if (rng() % 2)
          s->else_body =
              gen_block(1 + static_cast<int>(rng() % static_cast<unsigned>(half)), depth + 1);
        budget -= 1 + count(s->body) + count(s->else_body);
        b.push_back(std::move(s));
      } else if (allow_loops && depth < 2 && budget >= 3) {
        auto s = mk(rsm::Stmt::Kind::Repeat);
        s->count = 2 + static_cast<rsm::Value>(rng() % 2);  // 2..3 iterations
        s->body = gen_block(1 + static_cast<int>(rng() % 3), depth + 1);
        budget -= 1 + count(s->body);
        b.push_back(std::move(s));
      } else {
        auto s = mk(rsm::Stmt::Kind::Compute);
        s->label = "c" + std::to_string(rng() % 1000);
        s->cycles = 1;
        b.push_back(std::move(s));
        budget -= 1;
      }
    }
    return b;
  }

  static int count(const rsm::Block& b) {
    int n = 0;
    for (const auto& s : b) {
      n += 1 + count(s->body) + count(s->else_body);
    }
    return n;
  }
};

}  // namespace rsmtest

namespace rsmtest {

// Random small nets for the LP-vs-BFS soundness property.
struct NetGenerator {
  std::mt19937_64 rng;
  explicit NetGenerator(std::uint64_t seed) : rng(seed) {}

  rsm::PetriNet gen() {
    rsm::PetriNet net;
    int np = 2 + static_cast<int>(rng() % 7);  // <= 8 places
    int nt = 1 + static_cast<int>(rng() % 8);  // <= 8 transitions
    for (int p = 0; p < np; ++p)
      net.places.push_back({"p" + std::to_string(p), rsm::PetriNet::Place::Kind::Control, 0,
                            -1, -1});
    int tokens = static_cast<int>(rng() % 4);  // m0 total <= 3
    for (int k = 0; k < tokens; ++k)
      net.places[rng() % static_cast<unsigned>(np)].initial += 1;
    for (int t = 0; t < nt; ++t) {
      rsm::PetriNet::Transition tr;
      tr.name = "t" + std::to_string(t);
      int npre = static_cast<int>(rng() % 3);
      int npost = static_cast<int>(rng() % 3);
      for (int i = 0; i < npre; ++i)
        tr.pre.push_back({static_cast<int>(rng() % static_cast<unsigned>(np)),
                          static_cast<rsm::Tokens>(1 + rng() % 2)});
      for (int i = 0; i < npost; ++i)
        tr.post.push_back({static_cast<int>(rng() % static_cast<unsigned>(np)),
                           static_cast<rsm::Tokens>(1 + rng() % 2)});
      net.transitions.push_back(std::move(tr));
    }
    return net;
  }

  rsm::MarkingConstraint gen_target(const rsm::PetriNet& net) {
    rsm::MarkingConstraint c;
    int nterms = 1 + static_cast<int>(rng() % 2);
    for (int i = 0; i < nterms; ++i) {
      rsm::MarkingConstraint::Term t;
      t.place = static_cast<int>(rng() % net.places.size());
      t.op = static_cast<rsm::MarkingConstraint::Term::Op>(rng() % 3);
      t.value = static_cast<rsm::Tokens>(rng() % 3);
      c.terms.push_back(t);
    }
    return c;
  }
};

}  // namespace rsmtest
