#include "rsmkit/printer.hpp"

#include <sstream>

namespace rsm {
namespace {

int precedence(BinOp op) {
  switch (op) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Eq:
    case BinOp::Ne:
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: return 3;
    case BinOp::Add:
    case BinOp::Sub: return 4;
    case BinOp::Mul:
    case BinOp::Div: return 5;
  }
  return 0;
}

const char* op_text(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
  }
  return "?";
}

void print_expr_prec(const Expr& e, int parent_prec, std::ostream& os) {
  switch (e.kind) {
    case Expr::Kind::IntLit:
      if (e.literal < 0) {
        // negative literals only arise from folded unary minus
        os << "(0 - " << -static_cast<long long>(e.literal) << ")";
      } else {
        os << e.literal;
      }
      break;
    case Expr::Kind::Var:
      os << e.var;
      break;
    case Expr::Kind::Unary:
      os << (e.un == UnOp::Neg ? "-" : "!");
      print_expr_prec(*e.lhs, 6, os);
      break;
    case Expr::Kind::Binary: {
      int p = precedence(e.bin);
      bool paren = p < parent_prec;
      if (paren) os << "(";
      print_expr_prec(*e.lhs, p, os);
      os << " " << op_text(e.bin) << " ";
      print_expr_prec(*e.rhs, p + 1, os);
      if (paren) os << ")";
      break;
    }
  }
}

std::string ind(int n) { return std::string(static_cast<size_t>(n) * 2, ' '); }

void print_stmts(const Block& b, int indent, std::ostream& os) {
  for (const auto& s : b) {
    os << ind(indent);
    switch (s->kind) {
      case Stmt::Kind::Read:
        os << "read " << s->port << " " << s->var << "\n";
        break;
      case Stmt::Kind::Write:
        os << "write " << s->port << " " << print_expr(*s->value) << "\n";
        break;
      case Stmt::Kind::Assign:
        os << "let " << s->var << " = " << print_expr(*s->value) << "\n";
        break;
      case Stmt::Kind::Compute:
        os << "compute " << s->label;
        if (s->cycles) os << " " << *s->cycles;
        os << "\n";
        break;
      case Stmt::Kind::Reconfigure:
        os << "reconfigure " << s->context << "\n";
        break;
      case Stmt::Kind::Call:
      case Stmt::Kind::CallFpga: {
        os << (s->kind == Stmt::Kind::Call ? "call " : "callfpga ") << s->callee << " "
           << s->var << " (";
        for (size_t i = 0; i < s->args.size(); ++i) {
          if (i) os << ", ";
          os << print_expr(*s->args[i]);
        }
        os << ")\n";
        break;
      }
      case Stmt::Kind::If:
        os << "if (" << print_expr(*s->value) << ") {\n";
        print_stmts(s->body, indent + 1, os);
        os << ind(indent) << "}";
        if (!s->else_body.empty()) {
          os << " else {\n";
          print_stmts(s->else_body, indent + 1, os);
          os << ind(indent) << "}";
        }
        os << "\n";
        break;
      case Stmt::Kind::Repeat:
        os << "repeat " << s->count << " {\n";
        print_stmts(s->body, indent + 1, os);
        os << ind(indent) << "}\n";
        break;
      case Stmt::Kind::Return:
        os << "return " << print_expr(*s->value) << "\n";
        break;
    }
  }
}

}  // namespace

std::string print_expr(const Expr& e) {
  std::ostringstream os;
  print_expr_prec(e, 0, os);
  return os.str();
}

std::string print_block(const Block& b, int indent) {
  std::ostringstream os;
  print_stmts(b, indent, os);
  return os.str();
}

std::string print_model(const SystemModel& m) {
  std::ostringstream os;
  os << "system " << m.name << " {\n";
  for (const auto& k : m.kernels) {
    os << ind(1) << "kernel " << k.name << "(";
    for (size_t i = 0; i < k.params.size(); ++i) {
      if (i) os << ", ";
      os << k.params[i];
    }
    os << ") {\n";
    print_stmts(k.body, 2, os);
    os << ind(1) << "}\n";
  }
  for (const auto& mod : m.modules) {
    os << ind(1) << "module " << mod.name << " {\n";
    for (const auto& p : mod.in_ports) os << ind(2) << "port in " << p << "\n";
    for (const auto& p : mod.out_ports) os << ind(2) << "port out " << p << "\n";
    os << ind(2) << "behavior {\n";
    print_stmts(mod.behavior, 3, os);
    os << ind(2) << "}\n";
    for (const auto& [label, cyc] : mod.hw_annotation)
      os << ind(2) << "annotate " << label << " " << cyc << "\n";
    os << ind(1) << "}\n";
  }
  for (const auto& ch : m.channels) {
    os << ind(1) << "channel " << ch.name << " " << ch.src.str() << " -> " << ch.dst.str();
    if (ch.capacity) os << " capacity " << *ch.capacity;
    if (ch.self_loop) os << " selfloop";
    os << "\n";
  }
  if (m.bus)
    os << ind(1) << "bus " << m.bus->name << " cycles_per_word " << m.bus->cycles_per_word
       << "\n";
  for (const auto& mod : m.modules) {
    auto it = m.placements.find(mod.name);
    if (it != m.placements.end())
      os << ind(1) << "place " << mod.name << " " << placement_name(it->second) << "\n";
  }
  for (const auto& c : m.contexts) {
    os << ind(1) << "context " << c.name << " {\n";
    for (const auto& f : c.functions)
      os << ind(2) << "fn " << f.name << " latency " << f.latency_cycles << "\n";
    os << ind(2) << "bitstream " << c.bitstream_words << "\n";
    os << ind(1) << "}\n";
  }
  if (m.initial_context) os << ind(1) << "initial_context " << *m.initial_context << "\n";
  os << "}\n";
  return os.str();
}

}  // namespace rsm
