#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsmkit/elaborate.hpp"

namespace rsm {

struct RuntimeTrap : std::runtime_error {
  RuntimeTrap(std::string mod, SourcePos p)
      : std::runtime_error("divide by zero in module '" + mod + "' at line " +
                           std::to_string(p.line)),
        module(std::move(mod)),
        pos(p) {}
  std::string module;
  SourcePos pos;
};

/// Optional execution hooks: coverage counters and one stuck-at fault.
struct ExecHooks {
  std::vector<std::uint8_t>* stmt_hit = nullptr;    // indexed by stmt id
  std::vector<std::uint8_t>* branch_then = nullptr; // indexed by stmt id of the if
  std::vector<std::uint8_t>* branch_else = nullptr;
  std::vector<std::uint8_t>* cond_true = nullptr;   // indexed by cond id
  std::vector<std::uint8_t>* cond_false = nullptr;

  int fault_slot = -1;   // variable slot whose reads are faulted
  Value fault_mask = 0;  // single bit
  bool fault_stuck1 = false;
};

inline Value wrap_add(Value a, Value b) {
  return static_cast<Value>(static_cast<std::uint32_t>(a) + static_cast<std::uint32_t>(b));
}
inline Value wrap_sub(Value a, Value b) {
  return static_cast<Value>(static_cast<std::uint32_t>(a) - static_cast<std::uint32_t>(b));
}
inline Value wrap_mul(Value a, Value b) {
  return static_cast<Value>(static_cast<std::uint32_t>(a) * static_cast<std::uint32_t>(b));
}
inline Value wrap_neg(Value a) {
  return static_cast<Value>(0u - static_cast<std::uint32_t>(a));
}

/// Evaluate an expression over variable slots. && and || short-circuit.
Value eval_expr(const Expr& e, const std::vector<Value>& vars, ExecHooks* hooks,
                const std::string& module_for_trap);

/// Run a pure kernel body on the given arguments. Fabric-internal execution:
/// no coverage or fault hooks apply. Traps are attributed to the call site.
Value eval_kernel(const ElaboratedKernel& k, const std::vector<Value>& args,
                  const std::string& module_for_trap, SourcePos call_pos);

/// Sequential statement machine over an elaborated program. The host drives
/// it one statement at a time and implements the channel/time semantics.
class ModuleMachine {
 public:
  explicit ModuleMachine(const ElaboratedProgram* prog)
      : prog_(prog), vars_(prog->vars.size(), 0) {
    if (!prog_->body.empty()) frames_.push_back({&prog_->body, 0, nullptr, 0});
  }

  bool done() const { return frames_.empty(); }

  /// Next statement to execute; never an exhausted frame. Null when done.
  const Stmt* peek() const {
    if (frames_.empty()) return nullptr;
    const Frame& f = frames_.back();
    return (*f.block)[f.index].get();
  }

  /// Mark the current statement executed and move past it (for statements
  /// without bodies). Handles loop back edges and frame pops.
  void advance();

  /// Execute an if: evaluates the condition, records hooks, enters the arm.
  void exec_if(ExecHooks* hooks, const std::string& module_name);

  /// Execute a repeat: enters the body (count is at least 1 after parsing).
  void exec_repeat();

  Value eval(const Expr& e, ExecHooks* hooks, const std::string& module_name) const {
    return eval_expr(e, vars_, hooks, module_name);
  }

  std::vector<Value> eval_args(const Stmt& s, ExecHooks* hooks,
                               const std::string& module_name) const {
    std::vector<Value> out;
    out.reserve(s.args.size());
    for (const auto& a : s.args) out.push_back(eval_expr(*a, vars_, hooks, module_name));
    return out;
  }

  void set_var(int slot, Value v) { vars_[static_cast<size_t>(slot)] = v; }
  Value get_var(int slot) const { return vars_[static_cast<size_t>(slot)]; }
  const std::vector<Value>& vars() const { return vars_; }

  /// True once after an iteration boundary of a top-level repeat loop
  /// (cyclostatic yield points). Reading clears the flag.
  bool take_outer_iteration_flag() {
    bool f = outer_iteration_;
    outer_iteration_ = false;
    return f;
  }

 private:
  struct Frame {
    const Block* block;
    size_t index;
    const Stmt* loop;  // repeat statement owning this frame, or null
    Value iterations_left;
  };

  void normalize();

  const ElaboratedProgram* prog_;
  std::vector<Value> vars_;
  std::vector<Frame> frames_;
  bool outer_iteration_ = false;
};

}  // namespace rsm
