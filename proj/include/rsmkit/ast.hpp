#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rsmkit/diagnostics.hpp"

namespace rsm {

// All values are 32-bit two's-complement integers with wrapping +,-,*.
// Signed division traps on a zero divisor; INT32_MIN / -1 wraps to INT32_MIN.
using Value = std::int32_t;

enum class BinOp { Add, Sub, Mul, Div, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnOp { Neg, Not };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  enum class Kind { IntLit, Var, Binary, Unary };

  Kind kind = Kind::IntLit;
  SourcePos pos;
  Value literal = 0;          // IntLit
  std::string var;            // Var
  BinOp bin = BinOp::Add;     // Binary
  UnOp un = UnOp::Neg;        // Unary
  ExprPtr lhs, rhs;           // Binary operands; Unary uses lhs

  // Elaboration ids. Comparison nodes get a condition slot for coverage.
  int cond_id = -1;
  // Variable slot, resolved during elaboration (-1 until then).
  int var_slot = -1;

  ExprPtr clone() const;
};

inline bool is_comparison(BinOp op) {
  switch (op) {
    case BinOp::Eq:
    case BinOp::Ne:
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge:
      return true;
    default:
      return false;
  }
}

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
using Block = std::vector<StmtPtr>;

Block clone_block(const Block& b);

struct Stmt {
  enum class Kind {
    Read,         // read <port> <var>
    Write,        // write <port> <expr>
    Assign,       // let <var> = <expr>
    Compute,      // compute <label> [cycles]
    Reconfigure,  // reconfigure <context>
    Call,         // call <kernel> <var> (args)   -- inlined during elaboration
    CallFpga,     // callfpga <fn> <var> (args)
    If,           // if (cond) { } else { }
    Repeat,       // repeat <n> { }
    Return        // return <expr>                -- kernels only
  };

  Kind kind = Kind::Assign;
  SourcePos pos;
  int id = -1;  // statement id, assigned at elaboration

  std::string port;                    // Read, Write
  std::string var;                     // Read target, Assign target, Call/CallFpga out
  ExprPtr value;                       // Write/Assign/Return expr, If condition
  std::string label;                   // Compute
  std::optional<Value> cycles;         // Compute inline annotation
  std::string context;                 // Reconfigure
  std::string callee;                  // Call, CallFpga
  std::vector<ExprPtr> args;           // Call, CallFpga
  Value count = 0;                     // Repeat
  Block body, else_body;               // If (then/else), Repeat (body)

  int var_slot = -1;  // resolved target slot (Read/Assign/Call/CallFpga)

  StmtPtr clone() const;
};

/// Pure value function hosted by the FPGA fabric (or inlined at call sites).
/// Body is restricted to let/if/repeat/call and a trailing return.
struct KernelDef {
  std::string name;
  std::vector<std::string> params;
  Block body;
  SourcePos pos;
};

}  // namespace rsm
