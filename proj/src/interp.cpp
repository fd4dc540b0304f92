#include "rsmkit/interp.hpp"

#include <cassert>
#include <limits>

namespace rsm {
namespace {

Value load_var(const Expr& e, const std::vector<Value>& vars, ExecHooks* hooks) {
  Value v = vars[static_cast<size_t>(e.var_slot)];
  if (hooks && hooks->fault_slot == e.var_slot) {
    if (hooks->fault_stuck1)
      v = static_cast<Value>(static_cast<std::uint32_t>(v) |
                             static_cast<std::uint32_t>(hooks->fault_mask));
    else
      v = static_cast<Value>(static_cast<std::uint32_t>(v) &
                             ~static_cast<std::uint32_t>(hooks->fault_mask));
  }
  return v;
}

void note_condition(const Expr& e, bool outcome, ExecHooks* hooks) {
  if (!hooks || e.cond_id < 0) return;
  if (outcome) {
    if (hooks->cond_true) (*hooks->cond_true)[static_cast<size_t>(e.cond_id)] = 1;
  } else {
    if (hooks->cond_false) (*hooks->cond_false)[static_cast<size_t>(e.cond_id)] = 1;
  }
}

}  // namespace

Value eval_expr(const Expr& e, const std::vector<Value>& vars, ExecHooks* hooks,
                const std::string& module_for_trap) {
  switch (e.kind) {
    case Expr::Kind::IntLit:
      return e.literal;
    case Expr::Kind::Var:
      return load_var(e, vars, hooks);
    case Expr::Kind::Unary: {
      Value v = eval_expr(*e.lhs, vars, hooks, module_for_trap);
      return e.un == UnOp::Neg ? wrap_neg(v) : static_cast<Value>(v == 0 ? 1 : 0);
    }
    case Expr::Kind::Binary: {
      if (e.bin == BinOp::And) {
        Value l = eval_expr(*e.lhs, vars, hooks, module_for_trap);
        if (l == 0) return 0;
        return eval_expr(*e.rhs, vars, hooks, module_for_trap) != 0 ? 1 : 0;
      }
      if (e.bin == BinOp::Or) {
        Value l = eval_expr(*e.lhs, vars, hooks, module_for_trap);
        if (l != 0) return 1;
        return eval_expr(*e.rhs, vars, hooks, module_for_trap) != 0 ? 1 : 0;
      }
      Value a = eval_expr(*e.lhs, vars, hooks, module_for_trap);
      Value b = eval_expr(*e.rhs, vars, hooks, module_for_trap);
      switch (e.bin) {
        case BinOp::Add: return wrap_add(a, b);
        case BinOp::Sub: return wrap_sub(a, b);
        case BinOp::Mul: return wrap_mul(a, b);
        case BinOp::Div:
          if (b == 0) throw RuntimeTrap(module_for_trap, e.pos);
          if (a == std::numeric_limits<Value>::min() && b == -1)
            return std::numeric_limits<Value>::min();
          return a / b;
        case BinOp::Eq: { bool r = a == b; note_condition(e, r, hooks); return r; }
        case BinOp::Ne: { bool r = a != b; note_condition(e, r, hooks); return r; }
        case BinOp::Lt: { bool r = a < b; note_condition(e, r, hooks); return r; }
        case BinOp::Le: { bool r = a <= b; note_condition(e, r, hooks); return r; }
        case BinOp::Gt: { bool r = a > b; note_condition(e, r, hooks); return r; }
        case BinOp::Ge: { bool r = a >= b; note_condition(e, r, hooks); return r; }
        default: break;
      }
      return 0;
    }
  }
  return 0;
}

namespace {

// Recursive executor for pure kernel bodies (let/if/repeat/return only).
bool run_kernel_block(const Block& b, std::vector<Value>& vars, Value& result,
                      const std::string& mod, SourcePos call_pos) {
  for (const auto& s : b) {
    switch (s->kind) {
      case Stmt::Kind::Assign:
        vars[static_cast<size_t>(s->var_slot)] =
            eval_expr(*s->value, vars, nullptr, mod);
        break;
      case Stmt::Kind::If: {
        Value c = eval_expr(*s->value, vars, nullptr, mod);
        if (run_kernel_block(c != 0 ? s->body : s->else_body, vars, result, mod, call_pos))
          return true;
        break;
      }
      case Stmt::Kind::Repeat:
        for (Value i = 0; i < s->count; ++i)
          if (run_kernel_block(s->body, vars, result, mod, call_pos)) return true;
        break;
      case Stmt::Kind::Return:
        result = eval_expr(*s->value, vars, nullptr, mod);
        return true;
      default:
        break;
    }
  }
  return false;
}

}  // namespace

Value eval_kernel(const ElaboratedKernel& k, const std::vector<Value>& args,
                  const std::string& module_for_trap, SourcePos call_pos) {
  assert(args.size() == k.num_params);
  std::vector<Value> vars(k.vars.size(), 0);
  for (size_t i = 0; i < args.size(); ++i) vars[i] = args[i];
  Value result = 0;
  try {
    run_kernel_block(k.body, vars, result, module_for_trap, call_pos);
  } catch (RuntimeTrap&) {
    throw RuntimeTrap(module_for_trap, call_pos);
  }
  return result;
}

void ModuleMachine::normalize() {
  while (!frames_.empty()) {
    Frame& f = frames_.back();
    if (f.index < f.block->size()) return;
    if (f.loop && f.iterations_left > 1) {
      --f.iterations_left;
      f.index = 0;
      if (frames_.size() == 2) outer_iteration_ = true;  // top-level loop back edge
      return;
    }
    bool was_outer_loop = f.loop && frames_.size() == 2;
    frames_.pop_back();
    if (was_outer_loop) outer_iteration_ = true;
  }
}

void ModuleMachine::advance() {
  assert(!frames_.empty());
  ++frames_.back().index;
  normalize();
}

void ModuleMachine::exec_if(ExecHooks* hooks, const std::string& module_name) {
  const Stmt* s = peek();
  assert(s && s->kind == Stmt::Kind::If);
  Value c = eval(*s->value, hooks, module_name);
  if (hooks) {
    if (c != 0 && hooks->branch_then) (*hooks->branch_then)[static_cast<size_t>(s->id)] = 1;
    if (c == 0 && hooks->branch_else) (*hooks->branch_else)[static_cast<size_t>(s->id)] = 1;
  }
  const Block* arm = c != 0 ? &s->body : &s->else_body;
  ++frames_.back().index;
  if (!arm->empty()) frames_.push_back({arm, 0, nullptr, 0});
  normalize();
}

void ModuleMachine::exec_repeat() {
  const Stmt* s = peek();
  assert(s && s->kind == Stmt::Kind::Repeat);
  ++frames_.back().index;
  if (!s->body.empty() && s->count > 0)
    frames_.push_back({&s->body, 0, s, s->count});
  normalize();
}

}  // namespace rsm
