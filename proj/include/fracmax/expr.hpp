#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fracmax/errors.hpp"

namespace fracmax::expr {

enum class Op { number, var_x, var_t, neg, add, sub, mul, div, pow, call };
enum class Func { sin, cos, exp, abs, sqrt, max, min };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::number;
  double value = 0.0;
  Func func = Func::sin;
  std::vector<NodePtr> args;
  int height = 1;  // longest path to a leaf
};

/// Immutable parsed expression in x and t.
class Expr {
 public:
  Expr() = default;
  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  double eval(double x, double t = 0.0) const;
  /// Minimal-parenthesis rendering; parse(to_string()) rebuilds the same tree.
  std::string to_string() const;
  const Node& root() const { return *root_; }
  bool uses(Op var) const;

 private:
  NodePtr root_;
};

enum class ErrorKind { syntax, unknown_identifier, arity };

class ParseError : public ContractError {
 public:
  ParseError(ErrorKind kind, std::size_t offset, std::vector<std::string> expected, std::string what);

  ErrorKind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  ErrorKind kind_;
  std::size_t offset_;
  std::vector<std::string> expected_;
};

struct ParseOptions {
  bool allow_x = true;
  bool allow_t = true;
};

/// Grammar:
///   expr    = term { ("+" | "-") term } ;
///   term    = unary { ("*" | "/") unary } ;
///   unary   = "-" unary | power ;
///   power   = primary [ "^" unary ] ;
///   primary = number | "x" | "t" | name "(" expr { "," expr } ")" | "(" expr ")" ;
Expr parse(std::string_view src, ParseOptions options = {});

}  // namespace fracmax::expr
