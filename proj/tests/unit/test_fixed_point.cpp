#include "doctest.h"
#include "v2v/errors.hpp"
#include "v2v/fixed_point.hpp"

using namespace v2v;

TEST_CASE("linear map: P = 0.28 - 0.08 P") {
  const auto report = fixed_point_bisect([](double p) { return 0.28 - 0.08 * p; }, 0.25, 0.375);
  CHECK(std::abs(report.value - 0.28 / 1.08) <= 1e-12);
  CHECK(report.residual <= 1e-10);
  CHECK(report.lo == 0.25);
  CHECK(report.hi == 0.375);
}

TEST_CASE("constant map") {
  const auto report = fixed_point_bisect([](double) { return 0.3; }, 0.1, 0.7);
  CHECK(report.value == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("identity map returns lo") {
  const auto report = fixed_point_bisect([](double p) { return p; }, 0.2, 0.6);
  CHECK(report.value == 0.2);
  CHECK(report.residual == 0.0);
}

TEST_CASE("bracket errors") {
  CHECK_THROWS_AS(fixed_point_bisect([](double) { return 0.9; }, 0.1, 0.5), BracketError);
  CHECK_THROWS_AS(fixed_point_bisect([](double p) { return p; }, 0.6, 0.2), BracketError);
}

TEST_CASE("a map with a jump cannot meet the tolerance") {
  CHECK_THROWS_AS(fixed_point_bisect([](double p) { return p < 0.5 ? 0.8 : 0.2; }, 0.0, 1.0),
                  NonConvergenceError);
}
