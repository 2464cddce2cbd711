#include <doctest.h>

#include <numeric>
#include <random>
#include <vector>

#include "matchbound/algorithms.hpp"
#include "matchbound/errors.hpp"
#include "matchbound/frontier.hpp"

using namespace matchbound;

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("threshold tables") {
  CHECK_NOTHROW(ThresholdFunction({1.0, 0.5, 0.5}));
  CHECK_THROWS_AS(ThresholdFunction({0.5, 0.6}), DomainError);
  CHECK_THROWS_AS(ThresholdFunction({1.2, 0.6}), DomainError);
  const Tabulated bumpy(0.0, 1.0, {0.5, 1.0, 0.2});
  const auto env = ThresholdFunction::upper_envelope(bumpy);
  CHECK(env(0.0) == 1.0);
  CHECK(env(0.5) == 1.0);
  CHECK(env(1.0) == doctest::Approx(0.2));
}

TEST_CASE("water filling examples") {
  const auto greedy = ThresholdFunction::constant(1.0);
  const std::vector<double> single{0.0};
  CHECK(water_fill(0.0, single, greedy)[0] == doctest::Approx(1.0));
  const std::vector<double> full{1.0};
  CHECK(water_fill(0.0, full, ThresholdFunction::constant(0.7))[0] == 0.0);

  // First equalize at 0.5, then split until the arriving vertex is full.
  const std::vector<double> two{0.0, 0.5};
  const auto inc = water_fill(0.0, two, greedy);
  CHECK(inc[0] == doctest::Approx(0.75));
  CHECK(inc[1] == doctest::Approx(0.25));
  CHECK(sum(inc) == doctest::Approx(1.0));

  CHECK(sum(water_fill(0.0, two, ThresholdFunction::constant(0.0))) == 0.0);
  CHECK(water_fill(0.3, std::vector<double>{}, greedy).empty());
}

TEST_CASE("fixed level stops at the threshold") {
  const std::vector<double> three{0.1, 0.1, 0.6};
  const auto inc = water_fill(0.0, three, ThresholdFunction::constant(0.3));
  CHECK(sum(inc) == doctest::Approx(0.3).epsilon(1e-11));
  CHECK(inc[0] == doctest::Approx(0.15));
  CHECK(inc[2] == 0.0);
}

TEST_CASE("single edge reaches the fixed point of the threshold") {
  // a(x) = 1 − x, so z = a(z) at one half.
  const ThresholdFunction falling({1.0, 0.0});
  const std::vector<double> single{0.0};
  CHECK(water_fill(0.0, single, falling)[0] == doctest::Approx(0.5).epsilon(1e-11));

  const auto f = optimal_frontier();
  const auto tz = ThresholdFunction::upper_envelope(f.a);
  const double z = water_fill(0.0, single, tz)[0];
  CHECK(std::abs(z - tz(z)) < 1e-9);
}

TEST_CASE("water filling properties on random inputs") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> level(0.0, 1.0);
  std::uniform_int_distribution<int> degree(1, 8);
  const auto f = optimal_frontier();
  const std::vector<ThresholdFunction> stops{ThresholdFunction::constant(1.0), ThresholdFunction::constant(0.4),
                                             ThresholdFunction::upper_envelope(f.a)};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> levels(static_cast<std::size_t>(degree(rng)));
    for (auto& l : levels) l = level(rng);
    const double u = level(rng) * 0.5;
    const auto& stop = stops[static_cast<std::size_t>(trial) % stops.size()];
    const auto inc = water_fill(u, levels, stop);
    const double poured = sum(inc);
    CHECK(u + poured <= 1.0 + 1e-12);
    double min_after = 2.0;
    for (std::size_t j = 0; j < levels.size(); ++j) {
      CHECK(inc[j] >= 0.0);
      CHECK(levels[j] + inc[j] <= 1.0 + 1e-12);
      min_after = std::min(min_after, levels[j] + inc[j]);
    }
    // Sorted order is preserved.
    for (std::size_t i = 0; i < levels.size(); ++i) {
      for (std::size_t j = 0; j < levels.size(); ++j) {
        if (levels[i] <= levels[j]) CHECK(levels[i] + inc[i] <= levels[j] + inc[j] + 1e-12);
      }
    }
    // Stopped for a reason.
    if (poured > 0.0) {
      const bool at_threshold = u + poured >= stop(min_after) - 1e-9;
      const bool saturated = min_after >= 1.0 - 1e-12 || u + poured >= 1.0 - 1e-12;
      CHECK((at_threshold || saturated));
    }
  }
}

TEST_CASE("initial portions") {
  const auto u = initial_portions(4, 0.5, InitPolicy::uniform);
  CHECK(u == std::vector<double>(4, 0.5));
  const auto s = initial_portions(4, 0.375, InitPolicy::skewed);
  CHECK(s == std::vector<double>{1.0, 0.5, 0.0, 0.0});
  CHECK_THROWS_AS(initial_portions(2, 1.5, InitPolicy::uniform), DomainError);
}

TEST_CASE("even split spreads over the block") {
  MatchState s;
  s.add_isolated(std::vector<double>{0.0, 0.0});
  const auto e = ArrivalEvent::complete_block(VertexId{2}, 1, {VertexId{0}, VertexId{1}});
  s.reveal(e);
  EvenSplitAlgorithm alg("evensplit:0.5", 0.5);
  const auto d = alg.on_arrival(e, s);
  REQUIRE(d.increments.size() == 2);
  CHECK(d.increments[0].amount == doctest::Approx(0.25));
  CHECK(d.total() == doctest::Approx(0.5));
  CHECK_THROWS_AS(EvenSplitAlgorithm("x", 1.5), DomainError);
}

TEST_CASE("even split respects capacity") {
  MatchState s;
  s.add_isolated(std::vector<double>{0.9, 0.0});
  const auto e = ArrivalEvent::complete_block(VertexId{2}, 2, {VertexId{0}, VertexId{1}});
  s.reveal(e);
  EvenSplitAlgorithm alg("evensplit:1.0", 1.0);
  const auto d = alg.on_arrival(e, s);
  CHECK_NOTHROW(apply_decision(s, e, d));
}

TEST_CASE("registry") {
  for (const auto& name : default_fleet()) CHECK(make_algorithm(name)->name() == name);
  CHECK(make_algorithm("overfill")->name() == "overfill");
  CHECK_THROWS_AS(make_algorithm("fixed:2"), DomainError);
  CHECK_THROWS_AS(make_algorithm("fixed:abc"), DomainError);
  CHECK_THROWS_AS(make_algorithm("random"), DomainError);
  CHECK(baseline(BaselineKind::fixed_level, 0.3)->name() == "fixed:0.3");
  CHECK(default_fleet().size() == 8);
}

TEST_CASE("baselines on a single edge") {
  auto single_edge = [](OnlineAlgorithm& alg) {
    MatchState s;
    s.add_isolated(std::vector<double>{0.0});
    const auto e = ArrivalEvent::single(VertexId{1}, {VertexId{0}});
    s.reveal(e);
    return alg.on_arrival(e, s).total();
  };
  CHECK(single_edge(*make_algorithm("greedy")) == doctest::Approx(1.0));
  CHECK(single_edge(*make_algorithm("fixed:0")) == 0.0);
}
