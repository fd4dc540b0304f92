#include "rsmkit/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "rsmkit/validate.hpp"

namespace rsm {
namespace {

enum class Tok {
  Ident,
  Int,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Comma,
  Dot,
  Arrow,
  Assign,
  Plus,
  Minus,
  Star,
  Slash,
  EqEq,
  NotEq,
  Lt,
  Le,
  Gt,
  Ge,
  AndAnd,
  OrOr,
  Not,
  End,
  Bad
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long long int_value = 0;
  bool int_overflow = false;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_ws();
    Token t;
    t.pos = {line_, col_};
    if (at_end()) {
      t.kind = Tok::End;
      return t;
    }
    char c = peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
        t.text.push_back(advance());
      t.kind = Tok::Ident;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
        t.text.push_back(advance());
      t.kind = Tok::Int;
      errno = 0;
      t.int_value = std::strtoll(t.text.c_str(), nullptr, 10);
      if (errno == ERANGE || t.int_value > 2147483647LL) t.int_overflow = true;
      return t;
    }
    advance();
    switch (c) {
      case '{': t.kind = Tok::LBrace; return t;
      case '}': t.kind = Tok::RBrace; return t;
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case ',': t.kind = Tok::Comma; return t;
      case '.': t.kind = Tok::Dot; return t;
      case '+': t.kind = Tok::Plus; return t;
      case '*': t.kind = Tok::Star; return t;
      case '/': t.kind = Tok::Slash; return t;
      case '-':
        if (match('>')) { t.kind = Tok::Arrow; return t; }
        t.kind = Tok::Minus;
        return t;
      case '=':
        if (match('=')) { t.kind = Tok::EqEq; return t; }
        t.kind = Tok::Assign;
        return t;
      case '!':
        if (match('=')) { t.kind = Tok::NotEq; return t; }
        t.kind = Tok::Not;
        return t;
      case '<':
        if (match('=')) { t.kind = Tok::Le; return t; }
        t.kind = Tok::Lt;
        return t;
      case '>':
        if (match('=')) { t.kind = Tok::Ge; return t; }
        t.kind = Tok::Gt;
        return t;
      case '&':
        if (match('&')) { t.kind = Tok::AndAnd; return t; }
        break;
      case '|':
        if (match('|')) { t.kind = Tok::OrOr; return t; }
        break;
      default:
        break;
    }
    t.kind = Tok::Bad;
    t.text = std::string(1, c);
    return t;
  }

 private:
  bool at_end() const { return idx_ >= src_.size(); }
  char peek() const { return src_[idx_]; }

  char advance() {
    char c = src_[idx_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  bool match(char c) {
    if (at_end() || peek() != c) return false;
    advance();
    return true;
  }

  void skip_ws() {
    while (!at_end()) {
      char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  size_t idx_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const std::set<std::string> kKeywords = {
    "system",  "module",    "port",        "in",       "out",     "channel",
    "bus",     "place",     "context",     "fn",       "bitstream", "behavior",
    "kernel",  "read",      "write",       "let",      "compute", "reconfigure",
    "call",    "callfpga",  "if",          "else",     "repeat",  "return",
    "annotate", "capacity", "unbounded",   "selfloop", "latency", "cycles_per_word",
    "initial_context", "hw", "sw", "fpga"};

constexpr int kMaxDiagnostics = 100;

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { cur_ = lex_.next(); }

  ParseResult run() {
    ParseResult result;
    SystemModel model;
    bool got_system = false;
    if (check_ident("system")) {
      got_system = parse_system(model);
    } else {
      error(cur_.pos, "expected 'system'");
    }
    if (!got_system || has_errors(diags_)) {
      result.diagnostics = std::move(diags_);
      return result;
    }
    // Structural validation (base invariants). Parse returns a model only if
    // it is clean at level 1.
    Diagnostics sem = validate(model, 1);
    for (auto& d : sem) diags_.push_back(std::move(d));
    result.diagnostics = std::move(diags_);
    if (!has_errors(result.diagnostics)) result.model = std::move(model);
    return result;
  }

 private:
  // --- token plumbing -------------------------------------------------
  void advance() { cur_ = lex_.next(); }

  bool check(Tok k) const { return cur_.kind == k; }
  bool check_ident(const std::string& kw) const {
    return cur_.kind == Tok::Ident && cur_.text == kw;
  }

  bool accept(Tok k) {
    if (!check(k)) return false;
    advance();
    return true;
  }

  bool accept_ident(const std::string& kw) {
    if (!check_ident(kw)) return false;
    advance();
    return true;
  }

  bool expect(Tok k, const std::string& what) {
    if (accept(k)) return true;
    error(cur_.pos, "expected " + what);
    return false;
  }

  bool expect_kw(const std::string& kw) {
    if (accept_ident(kw)) return true;
    error(cur_.pos, "expected '" + kw + "'");
    return false;
  }

  std::optional<std::string> expect_name(const std::string& what) {
    if (cur_.kind == Tok::Ident && !kKeywords.count(cur_.text)) {
      std::string n = cur_.text;
      advance();
      return n;
    }
    if (cur_.kind == Tok::Ident)
      error(cur_.pos, "'" + cur_.text + "' is a keyword; expected " + what);
    else
      error(cur_.pos, "expected " + what);
    return std::nullopt;
  }

  std::optional<Value> expect_int(const std::string& what) {
    if (cur_.kind == Tok::Int) {
      if (cur_.int_overflow) {
        error(cur_.pos, "integer literal out of 32-bit range");
        advance();
        return std::nullopt;
      }
      Value v = static_cast<Value>(cur_.int_value);
      advance();
      return v;
    }
    error(cur_.pos, "expected " + what);
    return std::nullopt;
  }

  void error(SourcePos pos, const std::string& msg) {
    if (static_cast<int>(diags_.size()) < kMaxDiagnostics)
      diags_.push_back({Severity::Error, pos, msg});
    else
      overflowed_ = true;
  }

  // Skip tokens until a brace boundary or a keyword that can start a
  // declaration/statement; keeps the parser total on malformed input.
  void synchronize() {
    int depth = 0;
    while (!check(Tok::End)) {
      if (check(Tok::LBrace)) ++depth;
      if (check(Tok::RBrace)) {
        if (depth == 0) return;
        --depth;
      }
      if (depth == 0 && cur_.kind == Tok::Ident && kKeywords.count(cur_.text) &&
          cur_.text != "in" && cur_.text != "out")
        return;
      advance();
    }
  }

  // --- grammar --------------------------------------------------------
  bool parse_system(SystemModel& m) {
    expect_kw("system");
    if (auto n = expect_name("system name")) m.name = *n;
    if (!expect(Tok::LBrace, "'{'")) return false;
    while (!check(Tok::RBrace) && !check(Tok::End) && !overflowed_) {
      if (check_ident("module")) {
        parse_module(m);
      } else if (check_ident("kernel")) {
        parse_kernel(m);
      } else if (check_ident("channel")) {
        parse_channel(m);
      } else if (check_ident("bus")) {
        parse_bus(m);
      } else if (check_ident("place")) {
        parse_place(m);
      } else if (check_ident("context")) {
        parse_context(m);
      } else if (check_ident("initial_context")) {
        advance();
        if (auto n = expect_name("context name")) m.initial_context = *n;
      } else {
        error(cur_.pos, "expected declaration (module, kernel, channel, bus, place, context, initial_context)");
        advance();
        synchronize();
      }
    }
    expect(Tok::RBrace, "'}' closing system");
    return true;
  }

  void parse_module(SystemModel& m) {
    SourcePos pos = cur_.pos;
    expect_kw("module");
    ModuleDef mod;
    mod.pos = pos;
    if (auto n = expect_name("module name")) mod.name = *n;
    if (!expect(Tok::LBrace, "'{'")) {
      synchronize();
      return;
    }
    while (!check(Tok::RBrace) && !check(Tok::End) && !overflowed_) {
      if (accept_ident("port")) {
        bool is_in = false;
        if (accept_ident("in")) {
          is_in = true;
        } else if (accept_ident("out")) {
          is_in = false;
        } else {
          error(cur_.pos, "expected 'in' or 'out'");
          synchronize();
          continue;
        }
        if (auto n = expect_name("port name")) {
          if (is_in)
            mod.in_ports.push_back(*n);
          else
            mod.out_ports.push_back(*n);
        }
      } else if (accept_ident("behavior")) {
        if (expect(Tok::LBrace, "'{'")) mod.behavior = parse_block();
      } else if (check_ident("annotate")) {
        SourcePos apos = cur_.pos;
        advance();
        auto label = expect_name("compute label");
        auto cyc = expect_int("cycle count");
        if (label && cyc) {
          if (*cyc < 0) error(apos, "annotation cycles must be non-negative");
          if (mod.hw_annotation.count(*label))
            error(apos, "duplicate annotation for label '" + *label + "'");
          mod.hw_annotation[*label] = *cyc;
        }
      } else {
        error(cur_.pos, "expected 'port', 'behavior' or 'annotate'");
        advance();
        synchronize();
      }
    }
    expect(Tok::RBrace, "'}' closing module");
    m.modules.push_back(std::move(mod));
  }

  void parse_kernel(SystemModel& m) {
    SourcePos pos = cur_.pos;
    expect_kw("kernel");
    KernelDef k;
    k.pos = pos;
    if (auto n = expect_name("kernel name")) k.name = *n;
    if (expect(Tok::LParen, "'('")) {
      if (!check(Tok::RParen)) {
        do {
          if (auto p = expect_name("parameter name"))
            k.params.push_back(*p);
          else
            break;
        } while (accept(Tok::Comma));
      }
      expect(Tok::RParen, "')'");
    }
    if (expect(Tok::LBrace, "'{'")) k.body = parse_block();
    m.kernels.push_back(std::move(k));
  }

  void parse_channel(SystemModel& m) {
    SourcePos pos = cur_.pos;
    expect_kw("channel");
    ChannelDef ch;
    ch.pos = pos;
    if (auto n = expect_name("channel name")) ch.name = *n;
    parse_portref(ch.src);
    expect(Tok::Arrow, "'->'");
    parse_portref(ch.dst);
    for (;;) {
      if (accept_ident("capacity")) {
        if (accept_ident("unbounded")) {
          ch.capacity = std::nullopt;
        } else if (auto v = expect_int("capacity")) {
          ch.capacity = *v;
        }
      } else if (accept_ident("selfloop")) {
        ch.self_loop = true;
      } else {
        break;
      }
    }
    m.channels.push_back(std::move(ch));
  }

  void parse_portref(PortRef& p) {
    if (auto mn = expect_name("module name")) p.module = *mn;
    expect(Tok::Dot, "'.'");
    if (auto pn = expect_name("port name")) p.port = *pn;
  }

  void parse_bus(SystemModel& m) {
    expect_kw("bus");
    BusDef b;
    if (auto n = expect_name("bus name")) b.name = *n;
    if (accept_ident("cycles_per_word")) {
      if (auto v = expect_int("cycles per word")) b.cycles_per_word = *v;
    }
    if (m.bus)
      error(cur_.pos, "duplicate bus declaration");
    else
      m.bus = b;
  }

  void parse_place(SystemModel& m) {
    SourcePos pos = cur_.pos;
    expect_kw("place");
    auto mod = expect_name("module name");
    Placement p = Placement::HW;
    if (accept_ident("hw")) {
      p = Placement::HW;
    } else if (accept_ident("sw")) {
      p = Placement::SW;
    } else if (accept_ident("fpga")) {
      p = Placement::FPGA;
    } else {
      error(cur_.pos, "expected 'hw', 'sw' or 'fpga'");
      return;
    }
    if (mod) {
      if (m.placements.count(*mod))
        error(pos, "duplicate placement for module '" + *mod + "'");
      m.placements[*mod] = p;
    }
  }

  void parse_context(SystemModel& m) {
    SourcePos pos = cur_.pos;
    expect_kw("context");
    ContextDef ctx;
    ctx.pos = pos;
    if (auto n = expect_name("context name")) ctx.name = *n;
    if (!expect(Tok::LBrace, "'{'")) {
      synchronize();
      return;
    }
    bool saw_bitstream = false;
    while (!check(Tok::RBrace) && !check(Tok::End) && !overflowed_) {
      if (accept_ident("fn")) {
        FnDecl f;
        if (auto n = expect_name("function name")) f.name = *n;
        expect_kw("latency");
        if (auto v = expect_int("latency cycles")) f.latency_cycles = *v;
        ctx.functions.push_back(std::move(f));
      } else if (check_ident("bitstream")) {
        SourcePos bpos = cur_.pos;
        advance();
        if (auto v = expect_int("bitstream word count")) {
          if (saw_bitstream) error(bpos, "duplicate bitstream declaration");
          ctx.bitstream_words = *v;
          saw_bitstream = true;
        }
      } else {
        error(cur_.pos, "expected 'fn' or 'bitstream'");
        advance();
        synchronize();
      }
    }
    expect(Tok::RBrace, "'}' closing context");
    if (!saw_bitstream)
      error(pos, "context '" + ctx.name + "' missing bitstream word count");
    m.contexts.push_back(std::move(ctx));
  }

  Block parse_block() {
    Block b;
    while (!check(Tok::RBrace) && !check(Tok::End) && !overflowed_) {
      if (auto s = parse_stmt())
        b.push_back(std::move(s));
      else
        synchronize();
    }
    expect(Tok::RBrace, "'}'");
    return b;
  }

  StmtPtr parse_stmt() {
    SourcePos pos = cur_.pos;
    auto s = std::make_unique<Stmt>();
    s->pos = pos;
    if (accept_ident("read")) {
      s->kind = Stmt::Kind::Read;
      if (auto p = expect_name("port name")) s->port = *p;
      if (auto v = expect_name("variable name")) s->var = *v;
      return s;
    }
    if (accept_ident("write")) {
      s->kind = Stmt::Kind::Write;
      if (auto p = expect_name("port name")) s->port = *p;
      s->value = parse_expr();
      return s;
    }
    if (accept_ident("let")) {
      s->kind = Stmt::Kind::Assign;
      if (auto v = expect_name("variable name")) s->var = *v;
      expect(Tok::Assign, "'='");
      s->value = parse_expr();
      return s;
    }
    if (accept_ident("compute")) {
      s->kind = Stmt::Kind::Compute;
      if (auto l = expect_name("compute label")) s->label = *l;
      if (check(Tok::Int)) {
        if (auto v = expect_int("cycles")) {
          if (*v < 0)
            error(pos, "compute cycles must be non-negative");
          else
            s->cycles = *v;
        }
      }
      return s;
    }
    if (accept_ident("reconfigure")) {
      s->kind = Stmt::Kind::Reconfigure;
      if (auto c = expect_name("context name")) s->context = *c;
      return s;
    }
    if (check_ident("call") || check_ident("callfpga")) {
      s->kind = cur_.text == "call" ? Stmt::Kind::Call : Stmt::Kind::CallFpga;
      advance();
      if (auto c = expect_name("function name")) s->callee = *c;
      if (auto v = expect_name("result variable")) s->var = *v;
      if (expect(Tok::LParen, "'('")) {
        if (!check(Tok::RParen)) {
          do {
            s->args.push_back(parse_expr());
          } while (accept(Tok::Comma));
        }
        expect(Tok::RParen, "')'");
      }
      return s;
    }
    if (accept_ident("if")) {
      s->kind = Stmt::Kind::If;
      expect(Tok::LParen, "'('");
      s->value = parse_expr();
      expect(Tok::RParen, "')'");
      if (expect(Tok::LBrace, "'{'")) s->body = parse_block();
      if (accept_ident("else")) {
        if (expect(Tok::LBrace, "'{'")) s->else_body = parse_block();
      }
      return s;
    }
    if (accept_ident("repeat")) {
      s->kind = Stmt::Kind::Repeat;
      if (auto v = expect_int("repeat count")) {
        if (*v < 1)
          error(pos, "repeat count must be a positive integer literal");
        else
          s->count = *v;
      }
      if (expect(Tok::LBrace, "'{'")) s->body = parse_block();
      return s;
    }
    if (accept_ident("return")) {
      s->kind = Stmt::Kind::Return;
      s->value = parse_expr();
      return s;
    }
    error(pos, "expected statement");
    return nullptr;
  }

  // Precedence climbing: || < && < comparison < +- < */ < unary < primary.
  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    auto e = parse_and();
    while (check(Tok::OrOr)) {
      SourcePos pos = cur_.pos;
      advance();
      auto b = std::make_unique<Expr>();
      b->kind = Expr::Kind::Binary;
      b->bin = BinOp::Or;
      b->pos = pos;
      b->lhs = std::move(e);
      b->rhs = parse_and();
      e = std::move(b);
    }
    return e;
  }

  ExprPtr parse_and() {
    auto e = parse_cmp();
    while (check(Tok::AndAnd)) {
      SourcePos pos = cur_.pos;
      advance();
      auto b = std::make_unique<Expr>();
      b->kind = Expr::Kind::Binary;
      b->bin = BinOp::And;
      b->pos = pos;
      b->lhs = std::move(e);
      b->rhs = parse_cmp();
      e = std::move(b);
    }
    return e;
  }

  ExprPtr parse_cmp() {
    auto e = parse_addsub();
    for (;;) {
      BinOp op;
      if (check(Tok::EqEq)) op = BinOp::Eq;
      else if (check(Tok::NotEq)) op = BinOp::Ne;
      else if (check(Tok::Lt)) op = BinOp::Lt;
      else if (check(Tok::Le)) op = BinOp::Le;
      else if (check(Tok::Gt)) op = BinOp::Gt;
      else if (check(Tok::Ge)) op = BinOp::Ge;
      else break;
      SourcePos pos = cur_.pos;
      advance();
      auto b = std::make_unique<Expr>();
      b->kind = Expr::Kind::Binary;
      b->bin = op;
      b->pos = pos;
      b->lhs = std::move(e);
      b->rhs = parse_addsub();
      e = std::move(b);
    }
    return e;
  }

  ExprPtr parse_addsub() {
    auto e = parse_muldiv();
    for (;;) {
      BinOp op;
      if (check(Tok::Plus)) op = BinOp::Add;
      else if (check(Tok::Minus)) op = BinOp::Sub;
      else break;
      SourcePos pos = cur_.pos;
      advance();
      auto b = std::make_unique<Expr>();
      b->kind = Expr::Kind::Binary;
      b->bin = op;
      b->pos = pos;
      b->lhs = std::move(e);
      b->rhs = parse_muldiv();
      e = std::move(b);
    }
    return e;
  }

  ExprPtr parse_muldiv() {
    auto e = parse_unary();
    for (;;) {
      BinOp op;
      if (check(Tok::Star)) op = BinOp::Mul;
      else if (check(Tok::Slash)) op = BinOp::Div;
      else break;
      SourcePos pos = cur_.pos;
      advance();
      auto b = std::make_unique<Expr>();
      b->kind = Expr::Kind::Binary;
      b->bin = op;
      b->pos = pos;
      b->lhs = std::move(e);
      b->rhs = parse_unary();
      e = std::move(b);
    }
    return e;
  }

  ExprPtr parse_unary() {
    if (check(Tok::Minus) || check(Tok::Not)) {
      auto u = std::make_unique<Expr>();
      u->kind = Expr::Kind::Unary;
      u->un = check(Tok::Minus) ? UnOp::Neg : UnOp::Not;
      u->pos = cur_.pos;
      advance();
      u->lhs = parse_unary();
      return u;
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    auto e = std::make_unique<Expr>();
    e->pos = cur_.pos;
    if (cur_.kind == Tok::Int) {
      e->kind = Expr::Kind::IntLit;
      if (cur_.int_overflow) error(cur_.pos, "integer literal out of 32-bit range");
      e->literal = static_cast<Value>(cur_.int_value);
      advance();
      return e;
    }
    if (cur_.kind == Tok::Ident && !kKeywords.count(cur_.text)) {
      e->kind = Expr::Kind::Var;
      e->var = cur_.text;
      advance();
      return e;
    }
    if (accept(Tok::LParen)) {
      auto inner = parse_expr();
      expect(Tok::RParen, "')'");
      return inner;
    }
    error(cur_.pos, "expected expression");
    e->kind = Expr::Kind::IntLit;
    e->literal = 0;
    if (!check(Tok::End) && !check(Tok::RBrace)) advance();
    return e;
  }

  Lexer lex_;
  Token cur_;
  Diagnostics diags_;
  bool overflowed_ = false;
};

}  // namespace

ParseResult parse_model(std::string_view text) {
  Parser p(text);
  return p.run();
}

ParseResult parse_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ParseResult r;
    r.diagnostics.push_back({Severity::Error, {0, 0}, "cannot open file: " + path});
    return r;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  return parse_model(text);
}

}  // namespace rsm
