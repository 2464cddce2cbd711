#include "matchbound/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "matchbound/errors.hpp"

namespace matchbound {

namespace {

const std::shared_ptr<const NeighborList>& no_neighbors() {
  static const auto empty = std::make_shared<const NeighborList>();
  return empty;
}

std::string id_str(VertexId v) { return std::to_string(v.value); }

}  // namespace

const char* to_string(StructureClaim claim) {
  switch (claim) {
    case StructureClaim::bipartite: return "bipartite";
    case StructureClaim::perfect_matching: return "perfect_matching";
    case StructureClaim::divisibility: return "divisibility";
    case StructureClaim::feasibility: return "feasibility";
  }
  return "unknown";
}

ArrivalEvent ArrivalEvent::single(VertexId id, NeighborList neighbors) {
  std::sort(neighbors.begin(), neighbors.end());
  ArrivalEvent event;
  event.simultaneous = false;
  event.batch.push_back({id, std::make_shared<const NeighborList>(std::move(neighbors))});
  return event;
}

ArrivalEvent ArrivalEvent::complete_block(VertexId first, std::size_t count, NeighborList neighbors) {
  std::sort(neighbors.begin(), neighbors.end());
  auto shared = std::make_shared<const NeighborList>(std::move(neighbors));
  ArrivalEvent event;
  event.simultaneous = true;
  event.batch.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    event.batch.push_back({VertexId{static_cast<std::uint32_t>(first.value + i)}, shared});
  }
  return event;
}

std::size_t ArrivalEvent::edge_count() const {
  std::size_t total = 0;
  for (const auto& v : batch) total += v.neighbors->size();
  return total;
}

std::ptrdiff_t ArrivalEvent::position_of(VertexId id) const {
  // Batches are contiguous id ranges in practice; fall back to a scan otherwise.
  if (!batch.empty() && id >= batch.front().id) {
    const auto offset = static_cast<std::size_t>(id.value - batch.front().id.value);
    if (offset < batch.size() && batch[offset].id == id) return static_cast<std::ptrdiff_t>(offset);
  }
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch[i].id == id) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

double AlgorithmDecision::total() const {
  double sum = 0.0;
  for (const auto& inc : increments) sum += inc.amount;
  return sum;
}

std::vector<VertexId> MatchState::add_isolated(std::span<const double> initial) {
  std::vector<VertexId> ids;
  ids.reserve(initial.size());
  for (double p : initial) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("initial portion outside [0,1]");
    ids.push_back(next_id());
    x_.push_back(p);
    initial_.push_back(p);
    back_.push_back(no_neighbors());
    loads_.emplace_back();
  }
  return ids;
}

void MatchState::reveal(const ArrivalEvent& event) {
  if (event.batch.empty()) throw DomainError("arrival event with no vertices");
  const VertexId first = next_id();
  for (std::size_t i = 0; i < event.batch.size(); ++i) {
    const auto& v = event.batch[i];
    if (v.id.value != first.value + i) {
      throw DomainError("arrival ids must continue the numbering; got " + id_str(v.id));
    }
    if (!v.neighbors) throw DomainError("missing neighbor list for vertex " + id_str(v.id));
    const auto& nbrs = *v.neighbors;
    if (!std::is_sorted(nbrs.begin(), nbrs.end()) ||
        std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end()) {
      throw DomainError("neighbor list of " + id_str(v.id) + " must be sorted and duplicate-free");
    }
    if (!nbrs.empty() && nbrs.back() >= first) {
      throw DomainError("vertex " + id_str(v.id) + " lists a neighbor that has not arrived earlier");
    }
  }
  for (const auto& v : event.batch) {
    x_.push_back(0.0);
    initial_.push_back(0.0);
    back_.push_back(v.neighbors);
    loads_.emplace_back();
  }
}

const NeighborList& MatchState::earlier_neighbors(VertexId v) const { return *back_.at(v.index()); }

double MatchState::edge_load(VertexId later, VertexId earlier) const {
  if (later < earlier) std::swap(later, earlier);
  const auto& nbrs = *back_.at(later.index());
  const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), earlier);
  if (it == nbrs.end() || *it != earlier) {
    throw UnknownEdge("no edge (" + id_str(later) + "," + id_str(earlier) + ")");
  }
  const auto& loads = loads_[later.index()];
  return loads.empty() ? 0.0 : loads[static_cast<std::size_t>(it - nbrs.begin())];
}

bool MatchState::has_edge(VertexId u, VertexId v) const {
  if (u < v) std::swap(u, v);
  if (u.index() >= back_.size()) return false;
  const auto& nbrs = *back_[u.index()];
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::size_t MatchState::edge_count() const {
  std::size_t total = 0;
  for (const auto& nbrs : back_) total += nbrs->size();
  return total;
}

double MatchState::total_portion() const { return std::accumulate(x_.begin(), x_.end(), 0.0); }

double MatchState::total_initial() const {
  return std::accumulate(initial_.begin(), initial_.end(), 0.0);
}

double MatchState::total_load() const {
  double sum = 0.0;
  for (const auto& loads : loads_) sum = std::accumulate(loads.begin(), loads.end(), sum);
  return sum;
}

double MatchState::max_conservation_error() const {
  std::vector<double> sums = initial_;
  for_each_edge([&](VertexId u, VertexId v, double load) {
    sums[u.index()] += load;
    sums[v.index()] += load;
  });
  double worst = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) worst = std::max(worst, std::abs(sums[i] - x_[i]));
  return worst;
}

MatchState apply_decision(MatchState state, const ArrivalEvent& event,
                          const AlgorithmDecision& decision) {
  struct Located {
    std::size_t later;
    std::size_t slot;
    double amount;
  };
  std::vector<Located> located;
  located.reserve(decision.increments.size());
  std::unordered_map<std::size_t, double> delta;

  for (const auto& inc : decision.increments) {
    if (!std::isfinite(inc.amount) || inc.amount < 0.0) {
      throw InfeasibleDecision("increment on (" + id_str(inc.arriving) + "," + id_str(inc.existing) +
                               ") must be a nonnegative finite fraction");
    }
    const auto pos = event.position_of(inc.arriving);
    if (pos < 0 || inc.arriving.index() >= state.back_.size()) {
      throw UnknownEdge("vertex " + id_str(inc.arriving) + " is not part of the triggering arrival");
    }
    const auto& nbrs = *state.back_[inc.arriving.index()];
    const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), inc.existing);
    if (it == nbrs.end() || *it != inc.existing) {
      throw UnknownEdge("edge (" + id_str(inc.arriving) + "," + id_str(inc.existing) +
                        ") was not revealed by the arrival");
    }
    if (inc.amount == 0.0) continue;
    located.push_back({inc.arriving.index(), static_cast<std::size_t>(it - nbrs.begin()), inc.amount});
    delta[inc.arriving.index()] += inc.amount;
    delta[inc.existing.index()] += inc.amount;
  }

  for (const auto& [v, add] : delta) {
    if (state.x_[v] + add > 1.0 + kFeasibilityTol) {
      throw InfeasibleDecision("x_" + std::to_string(v) + " would reach " +
                               std::to_string(state.x_[v] + add));
    }
  }

  for (const auto& loc : located) {
    auto& loads = state.loads_[loc.later];
    if (loads.empty()) loads.assign(state.back_[loc.later]->size(), 0.0);
    loads[loc.slot] += loc.amount;
  }
  for (const auto& [v, add] : delta) state.x_[v] += add;
  return state;
}

double average_portion(const MatchState& state, std::span<const VertexId> vertices) {
  if (vertices.empty()) throw EmptySet("average over an empty vertex set");
  double sum = 0.0;
  for (VertexId v : vertices) {
    if (v.index() >= state.vertex_count()) throw DomainError("unknown vertex " + id_str(v));
    sum += state.portion(v);
  }
  return sum / static_cast<double>(vertices.size());
}

void validate_initialization(std::span<const double> portions, std::size_t count, double mean) {
  if (portions.size() != count) {
    throw BadInitialization("expected " + std::to_string(count) + " initial portions, got " +
                            std::to_string(portions.size()));
  }
  double sum = 0.0;
  for (double p : portions) {
    if (!(p >= 0.0 && p <= 1.0)) throw BadInitialization("initial portion outside [0,1]");
    sum += p;
  }
  const double avg = count == 0 ? 0.0 : sum / static_cast<double>(count);
  if (std::abs(avg - mean) > kFeasibilityTol) {
    throw BadInitialization("initial portions average " + std::to_string(avg) + ", required " +
                            std::to_string(mean));
  }
}

}  // namespace matchbound
