#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "acsol/expression.hpp"

using namespace acsol;

namespace {

double eval(const std::string& s, std::vector<double> x = {}, int dim = 3) {
  return eval_expression(parse_expression(s, dim), x);
}

}  // namespace

TEST_CASE("ast rendering") {
  CHECK(parse_expression("1+0.1*sin(x1)").describe() == "Add(1,Mul(0.1,Sin(x1)))");
}

TEST_CASE("power is left-associative and binds tighter than unary minus") {
  CHECK(eval("2^3^2") == 64);
  CHECK(eval("-2^2") == -4);
  CHECK(eval("2^(-1)") == 0.5);
  CHECK(eval("2*3+4/8-1") == doctest::Approx(5.5));
}

TEST_CASE("constants and identities") {
  CHECK(eval("pi") == std::numbers::pi);
  CHECK(std::abs(eval("sin(x1)^2+cos(x1)^2", {0.7}) - 1.0) < 1e-15);
  CHECK(eval("exp(0)") == 1.0);
}

TEST_CASE("unknown variable reports its offset") {
  try {
    parse_expression("sin(x4)", 2);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
    CHECK(e.kind() == ErrorKind::ParseError);
  }
}

TEST_CASE("division by zero is reported at evaluation") {
  const auto ast = parse_expression("1/(x1-x1)", 1);
  double x = 0.3;
  try {
    eval_expression(ast, std::span<const double>(&x, 1));
    FAIL("expected DivisionByZero");
  } catch (const EvalError& e) {
    CHECK(e.kind() == ErrorKind::DivisionByZero);
  }
}

TEST_CASE("malformed inputs") {
  for (const char* s : {"", "(", "1+", "sin x1", "2^1.5", "x0", "foo(1)", "1 2", ")"}) {
    CAPTURE(s);
    CHECK_THROWS_AS(parse_expression(s, 3), ParseError);
  }
  std::string deep(200, '(');
  deep += "1" + std::string(200, ')');
  CHECK_THROWS_AS(parse_expression(deep, 1), Error);
}

TEST_CASE("fuzz: random strings never terminate abnormally") {
  const std::string alphabet = "0123456789+-*/^().x pisncoexp";
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> len(0, 24);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  int parsed = 0;
  const double point[3] = {0.1, 0.2, 0.3};
  for (int k = 0; k < 100000; ++k) {
    std::string s;
    const std::size_t n = len(rng);
    for (std::size_t i = 0; i < n; ++i) s += alphabet[pick(rng)];
    try {
      const auto ast = parse_expression(s, 3);
      ++parsed;
      try {
        (void)eval_expression(ast, point);
      } catch (const Error&) {
      }
    } catch (const Error&) {
    }
  }
  CHECK(parsed > 0);
}
