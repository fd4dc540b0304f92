#include "rsmkit/ast.hpp"

namespace rsm {

ExprPtr Expr::clone() const {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->pos = pos;
  e->literal = literal;
  e->var = var;
  e->bin = bin;
  e->un = un;
  e->cond_id = cond_id;
  e->var_slot = var_slot;
  if (lhs) e->lhs = lhs->clone();
  if (rhs) e->rhs = rhs->clone();
  return e;
}

Block clone_block(const Block& b) {
  Block out;
  out.reserve(b.size());
  for (const auto& s : b) out.push_back(s->clone());
  return out;
}

StmtPtr Stmt::clone() const {
  auto s = std::make_unique<Stmt>();
  s->kind = kind;
  s->pos = pos;
  s->id = id;
  s->port = port;
  s->var = var;
  if (value) s->value = value->clone();
  s->label = label;
  s->cycles = cycles;
  s->context = context;
  s->callee = callee;
  for (const auto& a : args) s->args.push_back(a->clone());
  s->count = count;
  s->body = clone_block(body);
  s->else_body = clone_block(else_body);
  s->var_slot = var_slot;
  return s;
}

}  // namespace rsm
