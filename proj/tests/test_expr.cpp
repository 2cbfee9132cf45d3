#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "fracmax/expr.hpp"

using namespace fracmax::expr;

namespace {

std::vector<std::string> corpus() {
  std::ifstream in(FRACMAX_TEST_DATA "/expr_corpus.txt");
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) lines.push_back(line);
  return lines;
}

bool same_value(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

ParseError parse_error(const std::string& src, ParseOptions opt = {}) {
  try {
    parse(src, opt);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error for '" << src << "'");
  return ParseError(ErrorKind::syntax, 0, {}, "");
}

}  // namespace

TEST_CASE("precedence and associativity") {
  CHECK(parse("1 - x^2").eval(0.0) == 1.0);
  CHECK(parse("1 - x^2").eval(3.0) == -8.0);
  CHECK(parse("1 - x^2").root().op == Op::sub);
  CHECK(parse("1 - x^2").root().args[1]->op == Op::pow);
  CHECK(parse("-2^2").eval(0.0) == -4.0);
  CHECK(parse("(-2)^2").eval(0.0) == 4.0);
  CHECK(parse("2^3^2").eval(0.0) == 512.0);
  CHECK(parse("2^-1").eval(0.0) == 0.5);
  CHECK(parse("8/4/2").eval(0.0) == 1.0);
  CHECK(parse("8-4-2").eval(0.0) == 2.0);
  CHECK(parse("2*-3").eval(0.0) == -6.0);
  CHECK(parse("x*t + 2").eval(2.0, 3.0) == 8.0);
  CHECK(parse("abs(-3) + max(1, 2)").eval(0.0) == 5.0);
  CHECK(parse("min(4, -1)").eval(0.0) == -1.0);
  CHECK(parse(" \t1+\n2 ").eval(0.0) == 3.0);
  CHECK(parse(".5").eval(0.0) == 0.5);
  CHECK(parse("1.5e3").eval(0.0) == 1500.0);
}

TEST_CASE("calls") {
  const Expr e = parse("max(0, sin(3.14159265358979*x))");
  CHECK(e.root().op == Op::call);
  CHECK(e.root().func == Func::max);
  CHECK(e.root().args.size() == 2);
  CHECK(e.eval(0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e.eval(-0.5) == 0.0);
  CHECK(parse("exp(0) + cos(0) + sqrt(16)").eval(0.0) == 6.0);
}

TEST_CASE("power uses repeated multiplication for small integer exponents") {
  CHECK(parse("x^2").eval(0.1) == 0.1 * 0.1);
  CHECK(parse("x^3").eval(1.1) == 1.1 * 1.1 * 1.1);
  CHECK(parse("x^0").eval(0.0) == 1.0);
  CHECK(parse("(1 - x^2)^0.5").eval(0.6) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(std::isnan(parse("x^0.5").eval(-1.0)));
}

TEST_CASE("floating point conventions propagate") {
  CHECK(std::isinf(parse("1/x").eval(0.0)));
  CHECK(std::isnan(parse("sqrt(x)").eval(-1.0)));
  CHECK(std::isnan(parse("0/0").eval(0.0)));
}

TEST_CASE("syntax errors carry offsets and expectations") {
  const ParseError e = parse_error("2 *");
  CHECK(e.kind() == ErrorKind::syntax);
  CHECK(e.offset() == 3);
  CHECK_FALSE(e.expected().empty());
  CHECK(std::string(e.what()).find("offset 3") != std::string::npos);

  CHECK(parse_error("").offset() == 0);
  CHECK(parse_error("x t").offset() == 2);
  CHECK(parse_error("(x").offset() == 2);
  CHECK(parse_error("3.)").offset() == 2);
  CHECK(parse_error("1 + + ").offset() == 4);
  CHECK(parse_error("max(1,)").offset() == 6);
  CHECK(parse_error("1e400").kind() == ErrorKind::syntax);
}

TEST_CASE("identifier and arity errors") {
  const ParseError unknown = parse_error("1 - y");
  CHECK(unknown.kind() == ErrorKind::unknown_identifier);
  CHECK(unknown.offset() == 4);
  CHECK(std::string(unknown.what()).find("'y'") != std::string::npos);
  CHECK(parse_error("sin(1, 2)").kind() == ErrorKind::arity);
  CHECK(parse_error("max(1)").kind() == ErrorKind::arity);
  CHECK(parse_error("foo(1)").kind() == ErrorKind::unknown_identifier);
  CHECK(parse_error("sin").kind() == ErrorKind::syntax);

  ParseOptions no_t;
  no_t.allow_t = false;
  CHECK(parse_error("x + t", no_t).kind() == ErrorKind::unknown_identifier);
  CHECK(parse_error("x + t", no_t).offset() == 4);
  CHECK_NOTHROW(parse("x", no_t));
  CHECK_FALSE(parse("x^2").uses(Op::var_t));
  CHECK(parse("x^t").uses(Op::var_t));
}

TEST_CASE("nesting depth is bounded") {
  CHECK_NOTHROW(parse(std::string(100, '(') + "x" + std::string(100, ')')));
  CHECK_THROWS_AS(parse(std::string(100000, '(') + "x" + std::string(100000, ')')), ParseError);
  CHECK_THROWS_AS(parse(std::string(100000, '-') + "x"), ParseError);
  std::string tower = "x";
  for (int i = 0; i < 100000; ++i) tower += "^x";
  CHECK_THROWS_AS(parse(tower), ParseError);
  CHECK_NOTHROW(parse("2^2^2^2^2^-x"));
  std::string chain = "x";
  for (int i = 0; i < 999; ++i) chain += "+x";
  CHECK(parse(chain).eval(1.0) == 1000.0);
  for (int i = 0; i < 2000000; ++i) chain += i % 2 ? "*x" : "+x";
  const ParseError flat = parse_error(chain);
  CHECK(flat.offset() == 2 * 1000 - 1);
}

TEST_CASE("canonical rendering") {
  CHECK(parse("1 - x^2").to_string() == "1 - x^2");
  CHECK(parse("(1-2)-3").to_string() == "1 - 2 - 3");
  CHECK(parse("1-(2-3)").to_string() == "1 - (2 - 3)");
  CHECK(parse("((((x))))").to_string() == "x");
  CHECK(parse("(-x)^2").to_string() == "(-x)^2");
  CHECK(parse("(2^3)^2").to_string() == "(2^3)^2");
  CHECK(parse("1e-3*x").to_string() == "0.001 * x");
  CHECK(parse("max(0,sin(x))").to_string() == "max(0, sin(x))");
}

TEST_CASE("round trip on the golden corpus") {
  const auto lines = corpus();
  REQUIRE(lines.size() == 50);
  for (const auto& src : lines) {
    CAPTURE(src);
    const Expr e = parse(src);
    const std::string once = e.to_string();
    const Expr again = parse(once);
    CHECK(again.to_string() == once);
    for (double x : {-1.3, -0.2, 0.0, 0.7, 2.0})
      for (double t : {0.0, 0.4, 1.5}) CHECK(same_value(e.eval(x, t), again.eval(x, t)));
  }
}

TEST_CASE("parse is total on random input") {
  std::mt19937_64 rng(12345);
  const std::string alphabet = "0123456789.eE+-*/^(),xtsincoexpabsqrtmaxmin \t\n";
  std::uniform_int_distribution<int> len(0, 40);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(alphabet.size()) - 1);
  std::uniform_int_distribution<int> byte(0, 255);
  std::bernoulli_distribution raw(0.2);
  int parsed = 0;
  int rejected = 0;
  int bad_offsets = 0;
  for (int i = 0; i < 100000; ++i) {
    std::string s(len(rng), ' ');
    for (char& c : s) c = raw(rng) ? static_cast<char>(byte(rng)) : alphabet[pick(rng)];
    try {
      const Expr e = parse(s);
      const double a = e.eval(0.3, 0.7);
      const double b = e.eval(0.3, 0.7);
      if (!same_value(a, b)) ++bad_offsets;
      ++parsed;
    } catch (const ParseError& err) {
      if (err.offset() > s.size()) ++bad_offsets;
      ++rejected;
    }
  }
  CHECK(parsed + rejected == 100000);
  CHECK(parsed > 0);
  CHECK(bad_offsets == 0);
}
