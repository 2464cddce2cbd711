#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace matchbound {

// Absolute tolerance for every feasibility comparison on matched portions.
inline constexpr double kFeasibilityTol = 1e-9;

// Vertices are numbered densely in arrival order; ids are never reused.
struct VertexId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(VertexId, VertexId) = default;
  constexpr std::size_t index() const noexcept { return value; }
};

using NeighborList = std::vector<VertexId>;

struct ArrivingVertex {
  VertexId id;
  // Sorted ids of earlier vertices. Vertices of one batch usually share the list.
  std::shared_ptr<const NeighborList> neighbors;
};

// One arrival step. With `simultaneous` the whole batch is revealed before
// the algorithm decides; otherwise the batch holds a single vertex.
struct ArrivalEvent {
  std::vector<ArrivingVertex> batch;
  bool simultaneous = true;

  static ArrivalEvent single(VertexId id, NeighborList neighbors);
  // `count` new vertices starting at `first`, each adjacent to all of `neighbors`.
  static ArrivalEvent complete_block(VertexId first, std::size_t count, NeighborList neighbors);

  std::size_t edge_count() const;
  // Position of `id` inside the batch, or -1.
  std::ptrdiff_t position_of(VertexId id) const;
};

struct Increment {
  VertexId arriving;
  VertexId existing;
  double amount = 0.0;
};

struct AlgorithmDecision {
  std::vector<Increment> increments;

  double total() const;
};

// Fractional matching on the graph revealed so far. x_v is the vertex's
// initial portion (from an initialization step, if any) plus the loads of its
// incident edges. Edges are stored on the later endpoint.
class MatchState {
public:
  std::size_t vertex_count() const noexcept { return x_.size(); }
  VertexId next_id() const noexcept { return VertexId{static_cast<std::uint32_t>(x_.size())}; }

  double portion(VertexId v) const { return x_.at(v.index()); }
  std::span<const double> portions() const noexcept { return x_; }
  double initial_portion(VertexId v) const { return initial_.at(v.index()); }

  // Adds isolated vertices holding the given initial portions.
  std::vector<VertexId> add_isolated(std::span<const double> initial);
  // Inserts the batch's vertices and their edges. Ids must continue the
  // numbering and every neighbor must have arrived earlier.
  void reveal(const ArrivalEvent& event);

  const NeighborList& earlier_neighbors(VertexId v) const;
  double edge_load(VertexId later, VertexId earlier) const;
  bool has_edge(VertexId u, VertexId v) const;
  std::size_t edge_count() const;

  // Calls f(later, earlier, load) for every edge.
  template <typename F>
  void for_each_edge(F&& f) const {
    for (std::size_t u = 0; u < back_.size(); ++u) {
      const auto& nbrs = *back_[u];
      const auto& loads = loads_[u];
      for (std::size_t j = 0; j < nbrs.size(); ++j) {
        f(VertexId{static_cast<std::uint32_t>(u)}, nbrs[j], loads.empty() ? 0.0 : loads[j]);
      }
    }
  }

  double total_portion() const;
  double total_load() const;
  double total_initial() const;
  // max_v |x_v - initial_v - Σ incident loads|.
  double max_conservation_error() const;

  friend MatchState apply_decision(MatchState state, const ArrivalEvent& event,
                                   const AlgorithmDecision& decision);

private:
  std::vector<double> x_;
  std::vector<double> initial_;
  std::vector<std::shared_ptr<const NeighborList>> back_;
  std::vector<std::vector<double>> loads_;  // parallel to back_; empty until loaded
};

// Applies the increments of `decision` to the edges revealed by `event`.
// Throws UnknownEdge or InfeasibleDecision; on error nothing is applied.
MatchState apply_decision(MatchState state, const ArrivalEvent& event,
                          const AlgorithmDecision& decision);

// Mean of x_v over `vertices`. Throws EmptySet.
double average_portion(const MatchState& state, std::span<const VertexId> vertices);

// Deterministic online fractional matching algorithm.
class OnlineAlgorithm {
public:
  virtual ~OnlineAlgorithm() = default;

  virtual std::string name() const = 0;

  // Initial portions for `count` isolated vertices; must average to `mean`.
  virtual std::vector<double> on_init(std::size_t count, double mean) = 0;

  // Called after the event's edges are revealed in `view`.
  virtual AlgorithmDecision on_arrival(const ArrivalEvent& event, const MatchState& view) = 0;
};

// Throws BadInitialization unless `portions` has `count` entries in [0,1]
// averaging `mean` within kFeasibilityTol.
void validate_initialization(std::span<const double> portions, std::size_t count, double mean);

}  // namespace matchbound
