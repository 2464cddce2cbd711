#include <doctest.h>

#include <cmath>

#include "matchbound/errors.hpp"
#include "matchbound/tabulated.hpp"

using matchbound::Tabulated;

TEST_CASE("linear interpolation between samples and clamping outside") {
  const Tabulated t(0.0, 2.0, {0.0, 1.0, 4.0});
  CHECK(t(0.5) == doctest::Approx(0.5));
  CHECK(t(1.5) == doctest::Approx(2.5));
  CHECK(t(-1.0) == 0.0);
  CHECK(t(3.0) == 4.0);
  CHECK(t.step() == 1.0);
  CHECK(t.point(2) == 2.0);
}

TEST_CASE("last grid point is exactly the upper end") {
  const auto t = Tabulated::sample(0.0, 0.526104877663, 7, [](double x) { return x; });
  CHECK(t.point(7) == 0.526104877663);
  CHECK(t[7] == 0.526104877663);
}

TEST_CASE("cumulative trapezoid is exact for affine integrands") {
  const auto t = Tabulated::sample(0.0, 1.0, 10, [](double x) { return 3.0 * x + 1.0; });
  const auto cum = t.cumulative_integral();
  for (std::size_t i = 0; i <= 10; ++i) {
    const double x = t.point(i);
    CHECK(cum[i] == doctest::Approx(1.5 * x * x + x).epsilon(1e-12));
  }
}

TEST_CASE("degenerate tables are rejected") {
  CHECK_THROWS_AS(Tabulated(0.0, 1.0, {1.0}), matchbound::DomainError);
  CHECK_THROWS_AS(Tabulated(1.0, 1.0, {1.0, 2.0}), matchbound::DomainError);
}
