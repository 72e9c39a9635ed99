#include <cmath>

#include <doctest.h>

#include "fraclab/error.hpp"
#include "fraclab/expression.hpp"

using namespace fraclab;

namespace {
double eval(const char* src, Point x = {}, Point y = {}) {
  return Expression::parse(src, VariableSet::pair)(x, y);
}
}  // namespace

TEST_CASE("precedence and associativity") {
  CHECK(eval("1 + 2 * 3") == 7.0);
  CHECK(eval("2^3^2") == 64.0);
  CHECK(eval("-2^2") == -4.0);
  CHECK(eval("(1 + 2) * 3") == 9.0);
  CHECK(eval("8 / 4 / 2") == 1.0);
  CHECK(eval("1.5e1 - 5") == 10.0);
}

TEST_CASE("functions and variables") {
  CHECK(eval("min(x1, y1)", {0.2, 0.0}, {0.7, 0.0}) == 0.2);
  CHECK(eval("max(abs(x), 3)", {-4.0, 0.0}) == 4.0);
  CHECK(eval("sqrt(x2)", {0.0, 9.0}) == 3.0);
  CHECK(eval("exp(0) + cos(0) + sin(0)") == 2.0);
}

TEST_CASE("constants fold") {
  const Expression e = Expression::parse("2 * (1 + 0.5)", VariableSet::point);
  CHECK(e.is_constant());
  CHECK(e.constant_value() == 3.0);
  CHECK_FALSE(Expression::parse("x + 1", VariableSet::point).is_constant());
}

TEST_CASE("swapped exchanges x and y") {
  const Expression e = Expression::parse("x1 - 2 * y1", VariableSet::pair);
  const Point a{1.0, 0.0}, b{3.0, 0.0};
  CHECK(e.swapped()(a, b) == e(b, a));
}

TEST_CASE("parse errors report a position") {
  CHECK_THROWS_AS(Expression::parse("1 +", VariableSet::point), ParseError);
  CHECK_THROWS_AS(Expression::parse("y1", VariableSet::point), ParseError);
  CHECK_THROWS_AS(Expression::parse("foo(x)", VariableSet::point), ParseError);
  CHECK_THROWS_AS(Expression::parse("min(1)", VariableSet::point), ParseError);
  try {
    Expression::parse("1 + * 2", VariableSet::point);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("dimension usage") {
  CHECK(Expression::parse("x + y", VariableSet::pair).usage().compatible_with(1));
  CHECK_FALSE(Expression::parse("x2", VariableSet::point).usage().compatible_with(1));
  CHECK(Expression::parse("x1 * x2", VariableSet::point).usage().compatible_with(2));
}

TEST_CASE("named references inline with substituted arguments") {
  const Expression base = Expression::parse("1 + x1", VariableSet::point);
  Expression::ReferenceTable refs{{"p", {&base, 1}}};
  const Expression e = Expression::parse("p(x) + p(y)", VariableSet::pair, refs);
  CHECK(e({0.25, 0.0}, {0.5, 0.0}) == doctest::Approx(2.75));
}
