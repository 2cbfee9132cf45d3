#include "fracmax/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <optional>

#include <fmt/format.h>

namespace fracmax::expr {

namespace {

struct FuncInfo {
  std::string_view name;
  Func func;
  std::size_t arity;
};

constexpr std::array<FuncInfo, 7> kFuncs{{
    {"sin", Func::sin, 1},
    {"cos", Func::cos, 1},
    {"exp", Func::exp, 1},
    {"abs", Func::abs, 1},
    {"sqrt", Func::sqrt, 1},
    {"max", Func::max, 2},
    {"min", Func::min, 2},
}};

const FuncInfo* find_func(std::string_view name) {
  for (const auto& f : kFuncs)
    if (f.name == name) return &f;
  return nullptr;
}

std::string_view func_name(Func f) {
  for (const auto& info : kFuncs)
    if (info.func == f) return info.name;
  return "?";
}

constexpr int kMaxDepth = 200;
// Bounds recursion in eval, rendering and destruction for long flat chains like x+x+...+x.
constexpr int kMaxHeight = 1000;

NodePtr make(Op op, std::vector<NodePtr> args = {}, double value = 0.0, Func func = Func::sin) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->value = value;
  n->func = func;
  n->args = std::move(args);
  for (const auto& a : n->args) n->height = std::max(n->height, a->height + 1);
  return n;
}

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
 public:
  Parser(std::string_view src, ParseOptions opt) : src_(src), opt_(opt) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ < src_.size()) fail({"operator", "end of input"});
    return e;
  }

 private:
  std::string_view src_;
  ParseOptions opt_;
  std::size_t pos_ = 0;
  int depth_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r'))
      ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  bool at_end() {
    skip_ws();
    return pos_ >= src_.size();
  }

  std::string found() {
    if (at_end()) return "end of input";
    const unsigned char c = static_cast<unsigned char>(src_[pos_]);
    if (c >= 0x20 && c < 0x7f) return fmt::format("'{}'", static_cast<char>(c));
    return fmt::format("byte 0x{:02x}", c);
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    skip_ws();
    std::string list;
    for (std::size_t i = 0; i < expected.size(); ++i) list += (i ? ", " : "") + expected[i];
    throw ParseError(ErrorKind::syntax, pos_, std::move(expected),
                     fmt::format("syntax error at offset {}: expected {}; found {}", pos_, list, found()));
  }

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth) {
        throw ParseError(ErrorKind::syntax, p.pos_, {},
                         fmt::format("syntax error at offset {}: nesting deeper than {}", p.pos_, kMaxDepth));
      }
    }
    ~DepthGuard() { --p.depth_; }
  };

  NodePtr checked(NodePtr n, std::size_t at) {
    if (n->height > kMaxHeight) {
      throw ParseError(ErrorKind::syntax, at, {},
                       fmt::format("syntax error at offset {}: expression tree deeper than {}", at, kMaxHeight));
    }
    return n;
  }

  NodePtr expr() {
    DepthGuard guard(*this);
    NodePtr lhs = term();
    for (char c = peek(); c == '+' || c == '-'; c = peek()) {
      const std::size_t at = pos_++;
      lhs = checked(make(c == '+' ? Op::add : Op::sub, {lhs, term()}), at);
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (char c = peek(); c == '*' || c == '/'; c = peek()) {
      const std::size_t at = pos_++;
      lhs = checked(make(c == '*' ? Op::mul : Op::div, {lhs, unary()}), at);
    }
    return lhs;
  }

  NodePtr unary() {
    if (peek() == '-') {
      DepthGuard guard(*this);
      ++pos_;
      return make(Op::neg, {unary()});
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (peek() == '^') {
      DepthGuard guard(*this);
      ++pos_;
      return make(Op::pow, {base, unary()});
    }
    return base;
  }

  NodePtr number() {
    const std::size_t start = pos_;
    std::size_t p = pos_;
    while (p < src_.size() && is_digit(src_[p])) ++p;
    if (p < src_.size() && src_[p] == '.') {
      ++p;
      while (p < src_.size() && is_digit(src_[p])) ++p;
    }
    if (p == start + 1 && src_[start] == '.') {
      pos_ = start + 1;
      fail({"digit"});
    }
    if (p < src_.size() && (src_[p] == 'e' || src_[p] == 'E')) {
      std::size_t q = p + 1;
      if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
      if (q >= src_.size() || !is_digit(src_[q])) {
        pos_ = q;
        fail({"exponent digit"});
      }
      while (q < src_.size() && is_digit(src_[q])) ++q;
      p = q;
    }
    double v = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + p, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + p || !std::isfinite(v)) {
      throw ParseError(ErrorKind::syntax, start, {"finite number"},
                       fmt::format("syntax error at offset {}: number '{}' is out of range", start,
                                   src_.substr(start, p - start)));
    }
    pos_ = p;
    return make(Op::number, {}, v);
  }

  NodePtr primary() {
    const char c = peek();
    if (is_digit(c) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (peek() != ')') fail({"')'", "operator"});
      ++pos_;
      return e;
    }
    if (is_ident_start(c)) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
      const std::string_view name = src_.substr(start, pos_ - start);
      if (name == "x" && opt_.allow_x) return make(Op::var_x);
      if (name == "t" && opt_.allow_t) return make(Op::var_t);
      const FuncInfo* f = find_func(name);
      if (!f) {
        std::vector<std::string> known;
        if (opt_.allow_x) known.emplace_back("x");
        if (opt_.allow_t) known.emplace_back("t");
        for (const auto& info : kFuncs) known.emplace_back(info.name);
        throw ParseError(ErrorKind::unknown_identifier, start, known,
                         fmt::format("unknown identifier '{}' at offset {}", name, start));
      }
      if (peek() != '(') fail({"'('"});
      ++pos_;
      std::vector<NodePtr> args{expr()};
      while (peek() == ',') {
        ++pos_;
        args.push_back(expr());
      }
      if (peek() != ')') fail({"')'", "','", "operator"});
      ++pos_;
      if (args.size() != f->arity) {
        throw ParseError(ErrorKind::arity, start, {},
                         fmt::format("function '{}' at offset {} takes {} argument{}, got {}", name, start,
                                     f->arity, f->arity == 1 ? "" : "s", args.size()));
      }
      return make(Op::call, std::move(args), 0.0, f->func);
    }
    fail({"number", "identifier", "'('", "'-'"});
  }
};

double int_power(double base, long n) {
  const bool invert = n < 0;
  unsigned long e = static_cast<unsigned long>(invert ? -n : n);
  double acc = 1.0;
  while (e) {
    if (e & 1UL) acc *= base;
    base *= base;
    e >>= 1;
  }
  return invert ? 1.0 / acc : acc;
}

double power(double base, double expo) {
  if (expo == std::trunc(expo) && std::abs(expo) <= 64.0) return int_power(base, static_cast<long>(expo));
  return std::pow(base, expo);
}

double eval_node(const Node& n, double x, double t) {
  switch (n.op) {
    case Op::number: return n.value;
    case Op::var_x: return x;
    case Op::var_t: return t;
    case Op::neg: return -eval_node(*n.args[0], x, t);
    case Op::add: return eval_node(*n.args[0], x, t) + eval_node(*n.args[1], x, t);
    case Op::sub: return eval_node(*n.args[0], x, t) - eval_node(*n.args[1], x, t);
    case Op::mul: return eval_node(*n.args[0], x, t) * eval_node(*n.args[1], x, t);
    case Op::div: return eval_node(*n.args[0], x, t) / eval_node(*n.args[1], x, t);
    case Op::pow: return power(eval_node(*n.args[0], x, t), eval_node(*n.args[1], x, t));
    case Op::call: {
      const double a = eval_node(*n.args[0], x, t);
      switch (n.func) {
        case Func::sin: return std::sin(a);
        case Func::cos: return std::cos(a);
        case Func::exp: return std::exp(a);
        case Func::abs: return std::abs(a);
        case Func::sqrt: return std::sqrt(a);
        case Func::max: return std::fmax(a, eval_node(*n.args[1], x, t));
        case Func::min: return std::fmin(a, eval_node(*n.args[1], x, t));
      }
    }
  }
  return std::nan("");
}

int precedence(const Node& n) {
  switch (n.op) {
    case Op::add:
    case Op::sub: return 1;
    case Op::mul:
    case Op::div: return 2;
    case Op::neg: return 3;
    case Op::pow: return 4;
    default: return 5;
  }
}

void render(const Node& n, std::string& out);

void render_child(const Node& child, bool parens, std::string& out) {
  if (parens) out += '(';
  render(child, out);
  if (parens) out += ')';
}

void render(const Node& n, std::string& out) {
  const int p = precedence(n);
  switch (n.op) {
    case Op::number: out += fmt::format("{}", n.value); return;
    case Op::var_x: out += 'x'; return;
    case Op::var_t: out += 't'; return;
    case Op::neg:
      out += '-';
      render_child(*n.args[0], precedence(*n.args[0]) < 3, out);
      return;
    case Op::pow:
      render_child(*n.args[0], precedence(*n.args[0]) <= 4, out);
      out += '^';
      render_child(*n.args[1], precedence(*n.args[1]) < 3, out);
      return;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: {
      static constexpr std::string_view sym = "+-*/";
      render_child(*n.args[0], precedence(*n.args[0]) < p, out);
      out += ' ';
      out += sym[static_cast<int>(n.op) - static_cast<int>(Op::add)];
      out += ' ';
      render_child(*n.args[1], precedence(*n.args[1]) <= p, out);
      return;
    }
    case Op::call:
      out += func_name(n.func);
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        render(*n.args[i], out);
      }
      out += ')';
      return;
  }
}

bool uses_node(const Node& n, Op var) {
  if (n.op == var) return true;
  for (const auto& a : n.args)
    if (uses_node(*a, var)) return true;
  return false;
}

}  // namespace

ParseError::ParseError(ErrorKind kind, std::size_t offset, std::vector<std::string> expected, std::string what)
    : ContractError(what), kind_(kind), offset_(offset), expected_(std::move(expected)) {}

double Expr::eval(double x, double t) const { return eval_node(*root_, x, t); }

std::string Expr::to_string() const {
  std::string out;
  render(*root_, out);
  return out;
}

bool Expr::uses(Op var) const { return uses_node(*root_, var); }

Expr parse(std::string_view src, ParseOptions options) { return Expr(Parser(src, options).run()); }

}  // namespace fracmax::expr
