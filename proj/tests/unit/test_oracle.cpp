#include <doctest.h>

#include "matchbound/errors.hpp"
#include "matchbound/f_recursion.hpp"
#include "matchbound/oracle.hpp"
#include "support/oracles.hpp"

using namespace matchbound;

namespace {

OfflineGraph complete(std::uint32_t m) {
  OfflineGraph g;
  g.vertex_count = 2 * m;
  for (std::uint32_t i = 0; i < 2 * m; ++i) g.side.push_back(i < m ? 0 : 1);
  for (std::uint32_t i = 0; i < m; ++i) {
    for (std::uint32_t j = m; j < 2 * m; ++j) g.edges.emplace_back(i, j);
  }
  return g;
}

}  // namespace

TEST_CASE("maximum matching sizes") {
  OfflineGraph edge;
  edge.vertex_count = 2;
  edge.side = {0, 1};
  edge.edges = {{0, 1}};
  CHECK(max_matching(edge) == 1);
  CHECK(max_matching(complete(7)) == 7);

  // Path a-b-c-d needs an augmenting path after a greedy start on b-c.
  OfflineGraph path;
  path.vertex_count = 4;
  path.side = {1, 0, 1, 0};
  path.edges = {{1, 2}, {0, 1}, {2, 3}};
  CHECK(max_matching(path) == 2);

  OfflineGraph star;
  star.vertex_count = 4;
  star.side = {0, 1, 1, 1};
  star.edges = {{0, 1}, {0, 2}, {0, 3}};
  CHECK(max_matching(star) == 1);
}

TEST_CASE("matching rejects non-bipartite input") {
  OfflineGraph bad;
  bad.vertex_count = 2;
  bad.side = {0, 0};
  bad.edges = {{0, 1}};
  CHECK_THROWS_AS(max_matching(bad), NotBipartite);
  bad.side = {0};
  CHECK_THROWS_AS(max_matching(bad), NotBipartite);
}

TEST_CASE("game values") {
  CHECK(minimax_value(0.5, 0.6, 1, 1e-3).value == doctest::Approx(0.4));
  const auto coarse = minimax_value(0.5, 0.6, 2, 1.0 / 30.0);
  CHECK(std::abs(coarse.value - 2.0 / 15.0) <= 1.0 / 30.0);
  for (double gamma : {0.6, 0.9}) {
    const auto game = minimax_value(0.5, gamma, 2, 1e-3);
    const auto grids = f_sequence(FParams::make(0.5, gamma), 2);
    CHECK(std::abs(game.value - grids[1].values[0]) <= 1e-12);
    CHECK(std::abs(game.value - oracle::f2_exact(0.5, gamma, 0.0).value) <= 2e-3);
  }
  CHECK(minimax_value(0.5, 0.9, 2, 1e-3).value < 0.0);
  CHECK_THROWS_AS(minimax_value(0.5, 0.6, 3, 1e-3, 100), BudgetExceeded);
}

TEST_CASE("deeper game stays below the recursion") {
  const auto game = minimax_value(0.5, 0.6, 3, 1.0 / 20.0);
  const auto grids = f_sequence(FParams::make(0.5, 0.6, 1.0 / 20.0), 3);
  CHECK(game.value <= grids[2].values[0] + 2.0 / 20.0);
}

TEST_CASE("toy family") {
  CHECK(toy_ratio(0.5).ratio == doctest::Approx(0.5));
  CHECK(toy_ratio(1.0).ratio == doctest::Approx(0.5));
  CHECK(toy_ratio(2.0 / 3.0).ratio == doctest::Approx(2.0 / 3.0));
  const auto best = toy_sweep(1e-3);
  CHECK(std::abs(best.z - 2.0 / 3.0) <= 1e-3);
  CHECK(std::abs(best.ratio - 2.0 / 3.0) <= 1e-3);
  CHECK_THROWS_AS(toy_ratio(1.5), DomainError);
}
