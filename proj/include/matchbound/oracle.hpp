#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "matchbound/core_model.hpp"
#include "matchbound/transcript.hpp"

namespace matchbound {

struct OfflineGraph {
  std::size_t vertex_count = 0;
  std::vector<std::uint8_t> side;  // 0 or 1 per vertex
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

  // Final graph of a run, sides taken from the transcript's coloring.
  static OfflineGraph from_run(const Transcript& transcript, const MatchState& state);
};

// Maximum cardinality matching (Hopcroft–Karp). Throws NotBipartite when an
// edge joins two vertices on the same side or a side label is invalid.
std::size_t max_matching(const OfflineGraph& graph);

struct MinimaxResult {
  double value = 0.0;
  double best_a = 0.0;  // root action attaining the value
  std::size_t nodes = 0;
};

// Exact value at x = 0 of the finite game where the algorithm picks the
// average a from the action grid at every node and the adversary branches by
// comparing the grid F_{k−1} expressions. In the last step the algorithm may
// also saturate (a = 1 − x). Memoized on (k, x rounded to 1e-12); throws
// BudgetExceeded past `node_cap` distinct nodes.
MinimaxResult minimax_value(double eps, double gamma, std::size_t n, double action_step,
                            std::size_t node_cap = 2'000'000);

// Four-vertex toy family: an edge arrives and receives z, then two pendant
// vertices arrive, one on each endpoint, and are matched greedily. The ratio
// is the worst of ALG/OPT after the edge and after both pendants.
struct ToyOutcome {
  double z = 0.0;
  double ratio = 0.0;
};

ToyOutcome toy_ratio(double z);

// Best z on {0, step, ..., 1}; the smallest maximizer wins ties.
ToyOutcome toy_sweep(double step);

}  // namespace matchbound
