#include <doctest.h>

#include <cmath>
#include <sstream>

#include "matchbound/adversary.hpp"
#include "matchbound/algorithms.hpp"
#include "matchbound/errors.hpp"
#include "matchbound/f_recursion.hpp"
#include "support/oracles.hpp"

using namespace matchbound;

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(FParams::make(0.5, 0.6));
  CHECK_THROWS_AS(FParams::make(0.3, 0.6), DomainError);
  CHECK_THROWS_AS(FParams::make(0.5, 1.0), DomainError);
  CHECK_THROWS_AS(FParams::make(0.5, 0.6, 0.3), DomainError);
  CHECK_THROWS_AS(FParams::make(1.0 / 3.0, 0.6, 0.25), DomainError);
  const auto p = FParams::make(0.25, 0.6, 1e-3);
  CHECK(p.inv_eps == 4);
  CHECK(p.intervals == 1000);
}

TEST_CASE("F_1") {
  CHECK(f1(0.0, 0.6) == doctest::Approx(0.4));
  CHECK(f1(1.0, 0.6) == doctest::Approx(-0.1));
  CHECK(f1(0.5, 0.6) == doctest::Approx(0.15));
  CHECK_THROWS_AS(f1(1.5, 0.6), DomainError);
  const auto g = f_first(FParams::make(0.5, 0.6));
  for (std::size_t i = 0; i <= 1000; ++i) CHECK(g.values[i] == doctest::Approx(1.0 - g.params.x(i) / 2 - 0.6));
}

TEST_CASE("F_2 against the affine crossing") {
  for (double gamma : {0.6, 0.9}) {
    const auto p = FParams::make(0.5, gamma);
    const auto grids = f_sequence(p, 2);
    for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const auto exact = oracle::f2_exact(0.5, gamma, x);
      CHECK(std::abs(grids[1](x) - exact.value) <= 2 * p.grid_step);
      CHECK(std::abs(grids[1].argmax_a[static_cast<std::size_t>(x * 1000)] - exact.a) <= 2 * p.grid_step);
    }
  }
  const auto grids = f_sequence(FParams::make(0.5, 0.6), 2);
  CHECK(grids[1].values[0] == doctest::Approx(0.13325).epsilon(1e-12));
  CHECK(grids[1].argmax_a[0] == doctest::Approx(0.933));
  CHECK(grids[1].branch[0] == Branch::conservative);
  CHECK(grids[1].values[500] == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(grids[1].argmax_a[500] == doctest::Approx(0.6));
  CHECK(grids[1].values[1000] == doctest::Approx(-0.1));
  CHECK(grids[1].argmax_a[1000] == 0.0);
}

TEST_CASE("branch expressions") {
  const auto g = f_first(FParams::make(0.5, 0.6));
  const auto half = branch_values(g, 0.0, 0.5);
  CHECK(half.aggressive == doctest::Approx(0.35));
  CHECK(half.conservative == doctest::Approx(0.025));
  CHECK(half.chosen() == Branch::conservative);
  const auto full = branch_values(g, 0.0, 1.0);
  CHECK(full.aggressive == doctest::Approx(0.1));
  CHECK(full.conservative == doctest::Approx(0.15));
  CHECK(full.chosen() == Branch::aggressive);
  BranchValues tie{0.2, 0.2};
  CHECK(tie.chosen() == Branch::aggressive);
}

TEST_CASE("first negative step") {
  const auto high = find_negative_n(FParams::make(0.5, 0.9), 10);
  REQUIRE(high.has_value());
  CHECK(high->n == 2);
  CHECK(std::abs(high->value - (-13.0 / 60.0)) <= 2e-3);
  CHECK_FALSE(find_negative_n(FParams::make(0.5, 0.5), 12).has_value());
  CHECK_FALSE(find_negative_n(FParams::make(0.5, 0.45), 1).has_value());
  CHECK_THROWS_AS(find_negative_n(FParams::make(0.5, 0.5), 0), DomainError);
}

TEST_CASE("greedy keeps the value nonnegative at one half") {
  const auto p = FParams::make(0.5, 0.5);
  const auto grids = f_sequence(p, 4);
  for (std::size_t n = 1; n <= 4; ++n) {
    auto greedy = make_algorithm("greedy");
    const auto run = run_construction(AdversaryParams::make(n, p), *greedy, grids);
    CHECK(run.transcript.v_alg >= -1e-9);
    CHECK(grids[n - 1].values[0] >= -2 * p.grid_step);
  }
}

TEST_CASE("claims hold and shrink under refinement") {
  const auto coarse = f_sequence(FParams::make(0.25, 0.55, 1e-3), 3);
  const auto fine = f_sequence(FParams::make(0.25, 0.55, 5e-4), 3);
  const auto rc = certify_claims(coarse);
  const auto rf = certify_claims(fine);
  CHECK(rc.passed());
  CHECK(rf.passed());
  CHECK(rf.concavity_violation <= rc.concavity_violation + 1e-12);
  CHECK(std::abs(coarse[2].values[0] - fine[2].values[0]) <= 2e-3);

  const auto one = certify_claims(std::span(coarse).first(1));
  CHECK(one.concavity_violation <= 1e-12);
  CHECK(one.monotone_violation == 0.0);

  std::vector<FGrid> gap{coarse[0], coarse[2]};
  CHECK_THROWS_AS(certify_claims(gap), DomainError);
}

TEST_CASE("F_n(0) does not increase with n") {
  for (double gamma : {0.55, 0.6, 0.9}) {
    const auto grids = f_sequence(FParams::make(0.5, gamma), 5);
    for (std::size_t n = 1; n < grids.size(); ++n) CHECK(grids[n].values[0] <= grids[n - 1].values[0] + 1e-12);
  }
}

TEST_CASE("threads do not change the result") {
  const auto p = FParams::make(0.25, 0.6);
  const auto one = f_sequence(p, 3, 1);
  const auto four = f_sequence(p, 3, 4);
  CHECK(one[2].values == four[2].values);
  CHECK(one[2].argmax_a == four[2].argmax_a);
}

TEST_CASE("csv rows") {
  const auto grids = f_sequence(FParams::make(0.5, 0.6, 0.25), 2);
  std::ostringstream out;
  write_f_csv(out, grids);
  const auto text = out.str();
  CHECK(text.rfind("n,x,F,argmax_a,branch\n", 0) == 0);
  CHECK(text.find("1,0,0.4,1,none\n") != std::string::npos);
}
