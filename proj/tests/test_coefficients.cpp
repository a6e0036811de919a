#include <doctest.h>

#include "latticepde/coefficients.hpp"

using namespace latticepde;

TEST_CASE("eval") {
  const auto one = CoefficientField::constant(1.0);
  CHECK(one.eval(Site{0, 0}) == 1.0);
  CHECK(one.eval(Site{-40, 13}) == 1.0);
  CHECK(one.is_constant());

  const auto f = CoefficientField::radial_limit(1.0, {{Site{0, 0}, 0.5}});
  CHECK(f.eval(Site{0, 0}) == 1.5);
  CHECK(f.eval(Site{7, 7}) == 1.0);
  CHECK(f.limit() == 1.0);
  CHECK(!f.is_constant());
}

TEST_CASE("tail deviation") {
  const auto c = CoefficientField::constant(3.0);
  for (int r : {1, 2, 10}) CHECK(c.tail_deviation(r) == 0.0);

  const auto inner = CoefficientField::radial_limit(1.0, {{Site{1, 1}, 0.3}, {Site{0, -3}, -0.2}, {Site{2, 0}, 0.1}});
  CHECK(inner.tail_deviation(3) == 0.0);
  CHECK(inner.tail_deviation(1) == doctest::Approx(0.3));

  const auto outer = CoefficientField::radial_limit(1.0, {{Site{4, 0}, 0.2}});
  CHECK(outer.tail_deviation(3) == doctest::Approx(0.2));
  CHECK(outer.tail_deviation(4) == 0.0);

  // Nonincreasing in R.
  const auto many = CoefficientField::radial_limit(
      2.0, {{Site{1, 0}, 0.9}, {Site{3, 0}, -0.4}, {Site{0, 5}, 0.3}, {Site{-6, 1}, 0.05}});
  double last = many.tail_deviation(1);
  for (int r = 2; r < 10; ++r) {
    const double now = many.tail_deviation(r);
    CHECK(now <= last);
    last = now;
  }
  CHECK(last == 0.0);
  CHECK_THROWS(many.tail_deviation(0));
}

TEST_CASE("box extrema") {
  const auto f = CoefficientField::radial_limit(1.0, {{Site{0, 0}, 0.5}, {Site{5, 0}, -0.75}});
  CHECK(f.min_over(LatticeBox(2, 2)) == 1.0);
  CHECK(f.max_over(LatticeBox(2, 2)) == 1.5);
  CHECK(f.min_over(LatticeBox(2, 5)) == 0.25);
}

TEST_CASE("invalid fields") {
  CHECK_THROWS_AS(CoefficientField::constant(0.0), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientField::constant(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientField::radial_limit(0.0, {}), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientField::radial_limit(1.0, {{Site{0, 0}, -1.5}}), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientField::radial_limit(1.0, {{Site{0, 0}, 0.1}, {Site{0, 0}, 0.2}}), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientField::radial_limit(1.0, {{Site{0, 0}, 0.1}, {Site{0, 0, 1}, 0.2}}), std::invalid_argument);
  // Zero at a site is allowed; the limit stays positive.
  CHECK(CoefficientField::radial_limit(1.0, {{Site{0, 0}, -1.0}}).eval(Site{0, 0}) == 0.0);
}
