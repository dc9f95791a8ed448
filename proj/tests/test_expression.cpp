#include <doctest.h>

#include "segsolve/errors.hpp"
#include "support.hpp"

using namespace test;

TEST_CASE("expression precedence and functions") {
  CHECK(Expression::constant("1 + 2 * 3") == 7.0);
  CHECK(Expression::constant("2 ^ 3 ^ 2") == 512.0);
  CHECK(Expression::constant("-2 ^ 2") == -4.0);
  CHECK(Expression::constant("(1 + 2) * 3") == 9.0);
  CHECK(Expression::constant("max(1, 4) - min(2, 3)") == 2.0);
  CHECK(Expression::constant("abs(sin(1.5 * pi / 3))") == doctest::Approx(1.0));
  CHECK(Expression::constant("pow(2, 10)") == 1024.0);
  CHECK(Expression::constant("sqrt(16) + exp(0) + log(e)") == doctest::Approx(6.0));
  CHECK(Expression::constant("1e-8") == 1e-8);
}

TEST_CASE("expression variables") {
  const Expression e = Expression::parse("2*(1 - y^2) + x*theta - s");
  CHECK(e.uses_variables());
  CHECK(e.evaluate({1.0, 0.5, 2.0, 0.25}) == doctest::Approx(2 * 0.75 + 2.0 - 0.25));
  CHECK_FALSE(Expression::parse("3*pi").uses_variables());
}

TEST_CASE("expression errors") {
  CHECK_THROWS_AS(Expression::parse("1 +"), ConfigError);
  CHECK_THROWS_AS(Expression::parse("foo(1)"), ConfigError);
  CHECK_THROWS_AS(Expression::parse("(1"), ConfigError);
  CHECK_THROWS_AS(Expression::parse("z"), ConfigError);
  CHECK_THROWS_AS(Expression::constant("x + 1"), ConfigError);
}
