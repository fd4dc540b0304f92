#pragma once

#include <functional>

#include "rsmkit/ast.hpp"

namespace rsm {

/// Pre-order statement walk over a block, descending into if/repeat bodies.
template <typename F>
void for_each_stmt(const Block& b, F&& f) {
  for (const auto& s : b) {
    f(*s);
    for_each_stmt(s->body, f);
    for_each_stmt(s->else_body, f);
  }
}

template <typename F>
void for_each_stmt_mut(Block& b, F&& f) {
  for (auto& s : b) {
    f(*s);
    for_each_stmt_mut(s->body, f);
    for_each_stmt_mut(s->else_body, f);
  }
}

/// Pre-order expression walk.
template <typename F>
void for_each_expr(const Expr& e, F&& f) {
  f(e);
  if (e.lhs) for_each_expr(*e.lhs, f);
  if (e.rhs) for_each_expr(*e.rhs, f);
}

/// All expressions appearing in a statement (not descending into bodies).
template <typename F>
void for_stmt_exprs(const Stmt& s, F&& f) {
  if (s.value) for_each_expr(*s.value, f);
  for (const auto& a : s.args) for_each_expr(*a, f);
}

}  // namespace rsm
