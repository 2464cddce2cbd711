#include "matchbound/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <unordered_map>

#include "matchbound/algorithms.hpp"
#include "matchbound/errors.hpp"
#include "matchbound/f_recursion.hpp"

namespace matchbound {

OfflineGraph OfflineGraph::from_run(const Transcript& transcript, const MatchState& state) {
  OfflineGraph g;
  g.vertex_count = state.vertex_count();
  g.side.reserve(transcript.colors.size());
  for (Color c : transcript.colors) g.side.push_back(c == Color::white ? 0 : 1);
  g.edges.reserve(state.edge_count());
  state.for_each_edge([&](VertexId later, VertexId earlier, double) { g.edges.emplace_back(earlier.value, later.value); });
  return g;
}

std::size_t max_matching(const OfflineGraph& g) {
  const std::size_t n = g.vertex_count;
  if (g.side.size() != n) throw NotBipartite("side labels do not cover every vertex");
  for (auto s : g.side) {
    if (s > 1) throw NotBipartite("side label must be 0 or 1");
  }

  // Adjacency of side-0 vertices in CSR form.
  std::vector<std::size_t> start(n + 1, 0);
  for (const auto& [u, v] : g.edges) {
    if (u >= n || v >= n) throw NotBipartite("edge names an unknown vertex");
    if (g.side[u] == g.side[v]) {
      throw NotBipartite("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") joins one side");
    }
    ++start[(g.side[u] == 0 ? u : v) + 1];
  }
  for (std::size_t i = 0; i < n; ++i) start[i + 1] += start[i];
  std::vector<std::uint32_t> adj(g.edges.size());
  std::vector<std::size_t> fill(start.begin(), start.end() - 1);
  for (const auto& [u, v] : g.edges) {
    const auto left = g.side[u] == 0 ? u : v;
    const auto right = g.side[u] == 0 ? v : u;
    adj[fill[left]++] = right;
  }

  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::uint32_t> mate(n, kNone);
  std::vector<std::size_t> dist(n);
  std::vector<std::size_t> cursor(n);

  auto bfs = [&] {
    std::queue<std::uint32_t> queue;
    bool found = false;
    for (std::uint32_t u = 0; u < n; ++u) {
      if (g.side[u] != 0) continue;
      if (mate[u] == kNone) {
        dist[u] = 0;
        queue.push(u);
      } else {
        dist[u] = kInf;
      }
    }
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop();
      for (std::size_t e = start[u]; e < start[u + 1]; ++e) {
        const auto w = mate[adj[e]];
        if (w == kNone) {
          found = true;
        } else if (dist[w] == kInf) {
          dist[w] = dist[u] + 1;
          queue.push(w);
        }
      }
    }
    return found;
  };

  // Iterative DFS along layered edges.
  auto augment = [&](std::uint32_t root) {
    std::vector<std::uint32_t> stack{root};
    while (!stack.empty()) {
      const auto u = stack.back();
      if (cursor[u] == start[u + 1]) {
        dist[u] = kInf;
        stack.pop_back();
        continue;
      }
      const auto v = adj[cursor[u]];
      const auto w = mate[v];
      if (w == kNone) {
        // Flip the path root .. u, v.
        for (std::size_t i = stack.size(); i-- > 0;) {
          const auto left = stack[i];
          const auto right = adj[cursor[left]];
          mate[right] = left;
          mate[left] = right;
        }
        return true;
      }
      if (dist[w] == dist[u] + 1) {
        stack.push_back(w);
      } else {
        ++cursor[u];
      }
    }
    return false;
  };

  std::size_t matched = 0;
  while (bfs()) {
    for (std::uint32_t u = 0; u < n; ++u) cursor[u] = start[u];
    for (std::uint32_t u = 0; u < n; ++u) {
      if (g.side[u] == 0 && mate[u] == kNone && augment(u)) ++matched;
    }
  }
  return matched;
}

MinimaxResult minimax_value(double eps, double gamma, std::size_t n, double action_step, std::size_t node_cap) {
  if (n == 0) throw DomainError("n must be at least 1");
  const FParams p = FParams::make(eps, gamma, action_step);
  const auto grids = f_sequence(p, n);
  const std::size_t m = p.intervals;

  MinimaxResult result;
  std::vector<std::unordered_map<long long, double>> memo(n + 1);

  auto value = [&](auto&& self, std::size_t k, double x, double* best_a) -> double {
    const long long key = std::llround(x * 1e12);
    if (best_a == nullptr) {
      if (const auto it = memo[k].find(key); it != memo[k].end()) return it->second;
    }
    if (++result.nodes > node_cap) {
      throw BudgetExceeded("minimax exceeded " + std::to_string(node_cap) + " nodes");
    }
    double best = -std::numeric_limits<double>::infinity();
    double arg = 0.0;
    if (k == 1) {
      // Matching m ≤ 1 − x per vertex of A yields ½(x + 2m) − Γ.
      auto consider = [&](double a) {
        const double v = 0.5 * (x + 2.0 * a) - gamma;
        if (v > best) {
          best = v;
          arg = a;
        }
      };
      for (std::size_t j = 0; j <= m && p.x(j) <= 1.0 - x + 1e-12; ++j) consider(p.x(j));
      consider(std::max(0.0, 1.0 - x));
    } else {
      const FGrid& rule = grids[k - 2];
      for (std::size_t j = 0; j <= m; ++j) {
        const double a = p.x(j);
        if (x + eps * a > 1.0 + 1e-12) break;
        const double shifted = std::min(1.0, x + eps * a);
        double v = 0.0;
        if (branch_values(rule, x, a).chosen() == Branch::aggressive) {
          v = self(self, k - 1, shifted, nullptr) + eps * self(self, k - 1, a, nullptr);
        } else {
          v = (1.0 - eps) * self(self, k - 1, shifted, nullptr) + eps * (((1.0 + eps) * a + x) / 2.0 - gamma);
        }
        if (v > best) {
          best = v;
          arg = a;
        }
      }
    }
    memo[k][key] = best;
    if (best_a != nullptr) *best_a = arg;
    return best;
  };
  result.value = value(value, n, 0.0, &result.best_a);
  return result;
}

ToyOutcome toy_ratio(double z) {
  if (!(z >= 0.0 && z <= 1.0)) throw DomainError("first-edge level must lie in [0, 1]");
  MatchState state;
  auto greedy = make_algorithm("greedy");

  auto prefix_ratio = [&] {
    OfflineGraph g;
    g.vertex_count = state.vertex_count();
    // Vertices 0 and 3 on one side, 1 and 2 on the other.
    for (std::size_t i = 0; i < g.vertex_count; ++i) g.side.push_back(i == 0 || i == 3 ? 0 : 1);
    state.for_each_edge([&](VertexId later, VertexId earlier, double) { g.edges.emplace_back(earlier.value, later.value); });
    return 0.5 * state.total_portion() / static_cast<double>(max_matching(g));
  };

  state.add_isolated(std::vector<double>{0.0});
  const auto edge = ArrivalEvent::single(VertexId{1}, {VertexId{0}});
  state.reveal(edge);
  AlgorithmDecision first;
  first.increments.push_back({VertexId{1}, VertexId{0}, z});
  state = apply_decision(std::move(state), edge, first);
  double ratio = prefix_ratio();

  for (std::uint32_t anchor : {0u, 1u}) {
    const auto pendant = ArrivalEvent::single(state.next_id(), {VertexId{anchor}});
    state.reveal(pendant);
    const auto decision = greedy->on_arrival(pendant, state);
    state = apply_decision(std::move(state), pendant, decision);
  }
  ratio = std::min(ratio, prefix_ratio());
  return {z, ratio};
}

ToyOutcome toy_sweep(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw DomainError("sweep step must lie in (0, 1]");
  const auto count = static_cast<std::size_t>(std::llround(1.0 / step));
  ToyOutcome best{0.0, -1.0};
  for (std::size_t i = 0; i <= count; ++i) {
    const auto outcome = toy_ratio(std::min(1.0, static_cast<double>(i) * step));
    if (outcome.ratio > best.ratio) best = outcome;
  }
  return best;
}

}  // namespace matchbound
