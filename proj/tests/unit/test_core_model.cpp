#include <doctest.h>

#include <vector>

#include "matchbound/core_model.hpp"
#include "matchbound/errors.hpp"

using namespace matchbound;

namespace {

MatchState two_plus_one() {
  MatchState s;
  s.add_isolated(std::vector<double>{0.0, 0.5});
  s.reveal(ArrivalEvent::single(VertexId{2}, {VertexId{1}, VertexId{0}}));
  return s;
}

}  // namespace

TEST_CASE("reveal records edges on the later endpoint") {
  const auto s = two_plus_one();
  CHECK(s.vertex_count() == 3);
  CHECK(s.edge_count() == 2);
  CHECK(s.has_edge(VertexId{0}, VertexId{2}));
  CHECK(s.has_edge(VertexId{2}, VertexId{1}));
  CHECK_FALSE(s.has_edge(VertexId{0}, VertexId{1}));
  CHECK(s.earlier_neighbors(VertexId{2}).front() == VertexId{0});
}

TEST_CASE("reveal rejects bad events") {
  MatchState s;
  s.add_isolated(std::vector<double>{0.0});
  CHECK_THROWS_AS(s.reveal(ArrivalEvent::single(VertexId{5}, {VertexId{0}})), DomainError);
  CHECK_THROWS_AS(s.reveal(ArrivalEvent::single(VertexId{1}, {VertexId{3}})), DomainError);
  ArrivalEvent unsorted;
  unsorted.batch.push_back(
      {VertexId{1}, std::make_shared<const NeighborList>(NeighborList{VertexId{0}, VertexId{0}})});
  CHECK_THROWS_AS(s.reveal(unsorted), DomainError);
  CHECK(s.vertex_count() == 1);
}

TEST_CASE("complete block shares one neighbor list") {
  const auto e = ArrivalEvent::complete_block(VertexId{4}, 3, {VertexId{2}, VertexId{0}});
  REQUIRE(e.batch.size() == 3);
  CHECK(e.batch[0].neighbors == e.batch[2].neighbors);
  CHECK(e.batch[1].id == VertexId{5});
  CHECK(e.edge_count() == 6);
  CHECK(e.position_of(VertexId{6}) == 2);
  CHECK(e.position_of(VertexId{7}) == -1);
}

TEST_CASE("apply_decision updates both endpoints") {
  auto s = two_plus_one();
  const auto e = ArrivalEvent::single(VertexId{2}, {VertexId{0}, VertexId{1}});
  AlgorithmDecision d;
  d.increments = {{VertexId{2}, VertexId{0}, 0.3}, {VertexId{2}, VertexId{1}, 0.5}};
  s = apply_decision(std::move(s), e, d);
  CHECK(s.portion(VertexId{0}) == doctest::Approx(0.3));
  CHECK(s.portion(VertexId{1}) == doctest::Approx(1.0));
  CHECK(s.portion(VertexId{2}) == doctest::Approx(0.8));
  CHECK(s.edge_load(VertexId{2}, VertexId{1}) == doctest::Approx(0.5));
  CHECK(s.max_conservation_error() < 1e-15);
  CHECK(d.total() == doctest::Approx(0.8));
}

TEST_CASE("infeasible or unknown increments leave the state untouched") {
  const auto s = two_plus_one();
  const auto e = ArrivalEvent::single(VertexId{2}, {VertexId{0}, VertexId{1}});
  AlgorithmDecision over;
  over.increments = {{VertexId{2}, VertexId{1}, 0.6}};
  CHECK_THROWS_AS(apply_decision(s, e, over), InfeasibleDecision);
  AlgorithmDecision negative;
  negative.increments = {{VertexId{2}, VertexId{0}, -0.1}};
  CHECK_THROWS_AS(apply_decision(s, e, negative), InfeasibleDecision);
  AlgorithmDecision stranger;
  stranger.increments = {{VertexId{1}, VertexId{0}, 0.1}};
  CHECK_THROWS_AS(apply_decision(s, e, stranger), UnknownEdge);
  AlgorithmDecision split;
  split.increments = {{VertexId{2}, VertexId{0}, 0.6}, {VertexId{2}, VertexId{0}, 0.6}};
  CHECK_THROWS_AS(apply_decision(s, e, split), InfeasibleDecision);
  CHECK(s.total_portion() == doctest::Approx(0.5));
  CHECK(s.total_load() == 0.0);
}

TEST_CASE("average portion") {
  const auto s = two_plus_one();
  const std::vector<VertexId> both{VertexId{0}, VertexId{1}};
  CHECK(average_portion(s, both) == doctest::Approx(0.25));
  CHECK_THROWS_AS(average_portion(s, std::vector<VertexId>{}), EmptySet);
}

TEST_CASE("initialization vectors") {
  CHECK_NOTHROW(validate_initialization(std::vector<double>{1.0, 0.0}, 2, 0.5));
  CHECK_THROWS_AS(validate_initialization(std::vector<double>{0.9, 0.3}, 2, 0.5), BadInitialization);
  CHECK_THROWS_AS(validate_initialization(std::vector<double>{1.2, -0.2}, 2, 0.5), BadInitialization);
  CHECK_THROWS_AS(validate_initialization(std::vector<double>{0.5}, 2, 0.5), BadInitialization);
}

TEST_CASE("structure claims have stable names") {
  CHECK(std::string(to_string(StructureClaim::bipartite)) == "bipartite");
  CHECK(std::string(to_string(StructureClaim::perfect_matching)) == "perfect_matching");
  const StructureViolation v(StructureClaim::divisibility, "size 3");
  CHECK(v.claim() == StructureClaim::divisibility);
}
