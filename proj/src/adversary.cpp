#include "matchbound/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "matchbound/errors.hpp"

namespace matchbound {

namespace {

bool same_params(const FParams& l, const FParams& r) {
  return l.eps == r.eps && l.gamma == r.gamma && l.grid_step == r.grid_step;
}

// Rounds a down onto the grid the value functions are tabulated on.
double snap_down(double a, const FParams& p) {
  const double m = static_cast<double>(p.intervals);
  return std::clamp(std::floor(a * m + 1e-9) / m, 0.0, 1.0);
}

}  // namespace

std::uint64_t AdversaryParams::minimal_vertices(std::size_t n, std::size_t inv_eps) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (out > std::numeric_limits<std::uint64_t>::max() / inv_eps) {
      throw DomainError("(1/eps)^n overflows");
    }
    out *= inv_eps;
  }
  return out;
}

AdversaryParams AdversaryParams::make(std::size_t n, const FParams& fparams, double x0, std::uint64_t N) {
  if (n == 0) throw DomainError("n must be at least 1");
  if (!(x0 >= 0.0 && x0 <= 1.0)) throw DomainError("x0 must lie in [0, 1]");
  const std::uint64_t unit = minimal_vertices(n, fparams.inv_eps);
  if (N == 0) N = unit;
  if (N % unit != 0) throw DomainError("N must be a multiple of (1/eps)^n = " + std::to_string(unit));
  AdversaryParams p;
  p.n = n;
  p.N = N;
  p.x0 = x0;
  p.fparams = fparams;
  return p;
}

Construction::Construction(const AdversaryParams& params, OnlineAlgorithm& alg, AdversaryOptions options)
    : params_(params), alg_(alg), options_(options) {
  if (params.N > options.max_vertices) {
    throw BudgetExceeded("N = " + std::to_string(params.N) + " exceeds the vertex budget of " +
                         std::to_string(options.max_vertices));
  }
  transcript_.params = params;
  transcript_.algorithm = alg.name();
  const auto N = static_cast<std::size_t>(params.N);

  if (params.x0 == 0.0) {
    for (std::size_t i = 0; i < N; ++i) {
      const auto event = ArrivalEvent::single(state_.next_id(), {});
      state_.reveal(event);
      auto decision = alg_.on_arrival(event, state_);
      state_ = apply_decision(std::move(state_), event, decision);
      if (options_.record_events) {
        transcript_.events.push_back(event);
        transcript_.decisions.push_back(std::move(decision));
      }
    }
  } else {
    const auto portions = alg_.on_init(N, params.x0);
    validate_initialization(portions, N, params.x0);
    state_.add_isolated(portions);
  }

  transcript_.colors.assign(N, Color::white);
  inactive_.assign(N, 0);
  PartitionState root;
  root.id = next_partition_++;
  root.members.resize(N);
  for (std::size_t i = 0; i < N; ++i) root.members[i] = VertexId{static_cast<std::uint32_t>(i)};
  root.steps_remaining = params.n;
  active_.push_back(std::move(root));
}

PartitionState& Construction::find(std::size_t id) {
  const auto it = std::find_if(active_.begin(), active_.end(), [id](const auto& p) { return p.id == id; });
  if (it == active_.end()) throw DomainError("no active partition " + std::to_string(id));
  return *it;
}

std::vector<VertexId> Construction::present_block(const PartitionState& partition, std::size_t count,
                                                  double* mass) {
  const std::uint64_t new_edges = static_cast<std::uint64_t>(count) * partition.members.size();
  if (state_.vertex_count() + count > options_.max_vertices || edges_ + new_edges > options_.max_edges) {
    throw BudgetExceeded("construction exceeds the vertex or edge budget");
  }
  edges_ += new_edges;

  auto nbrs = std::make_shared<const NeighborList>(partition.members);
  const VertexId first = state_.next_id();
  std::vector<VertexId> block(count);
  for (std::size_t i = 0; i < count; ++i) block[i] = VertexId{static_cast<std::uint32_t>(first.value + i)};

  auto present = [&](ArrivalEvent event) {
    state_.reveal(event);
    auto decision = alg_.on_arrival(event, state_);
    state_ = apply_decision(std::move(state_), event, decision);
    *mass += decision.total();
    if (options_.record_events) {
      transcript_.events.push_back(std::move(event));
      transcript_.decisions.push_back(std::move(decision));
    }
  };
  if (options_.serialize_batches) {
    for (VertexId v : block) {
      ArrivalEvent event;
      event.simultaneous = false;
      event.batch.push_back({v, nbrs});
      present(std::move(event));
    }
  } else {
    ArrivalEvent event;
    event.simultaneous = true;
    event.batch.reserve(count);
    for (VertexId v : block) event.batch.push_back({v, nbrs});
    present(std::move(event));
  }

  transcript_.colors.resize(state_.vertex_count(), opposite(partition.color));
  inactive_.resize(state_.vertex_count(), 0);
  return block;
}

void Construction::deactivate(VertexId u, VertexId v) {
  if (inactive_.at(u.index()) || inactive_.at(v.index())) throw std::logic_error("vertex deactivated twice");
  inactive_[u.index()] = 1;
  inactive_[v.index()] = 1;
  transcript_.deactivations.emplace_back(u, v);
  transcript_.lazy_inactive_sum += state_.portion(u) + state_.portion(v);
}

void Construction::base_step(std::size_t partition_id) {
  PartitionState& part = find(partition_id);
  if (part.steps_remaining != 1) throw DomainError("base step needs exactly one remaining step");
  const std::size_t size = part.members.size();

  StepRecord record;
  record.partition = part.id;
  record.steps_remaining = 1;
  record.size_a = size;
  record.size_b = size;
  record.x_before = average_portion(state_, part.members);
  double mass = 0.0;
  const auto block = present_block(part, size, &mass);
  record.a = mass / static_cast<double>(size);
  record.x_after = average_portion(state_, part.members);
  for (std::size_t i = 0; i < size; ++i) deactivate(part.members[i], block[i]);
  transcript_.steps.push_back(record);

  active_.erase(std::find_if(active_.begin(), active_.end(), [&](const auto& p) { return p.id == partition_id; }));
}

std::optional<std::size_t> Construction::recursive_step(std::size_t partition_id, const FGrid& prev) {
  PartitionState& part = find(partition_id);
  const std::size_t k = part.steps_remaining;
  if (k < 2) throw DomainError("recursive step needs at least two remaining steps");
  if (prev.n != k - 1 || !same_params(prev.params, params_.fparams)) {
    throw DomainError("value grid does not match the step");
  }
  const FParams& fp = params_.fparams;
  const std::size_t size_a = part.members.size();
  if (size_a % fp.inv_eps != 0) throw StructureViolation(StructureClaim::divisibility, "partition not divisible");
  const std::size_t size_b = size_a / fp.inv_eps;

  StepRecord record;
  record.partition = part.id;
  record.steps_remaining = k;
  record.size_a = size_a;
  record.size_b = size_b;
  record.x_before = average_portion(state_, part.members);
  double mass = 0.0;
  const auto block = present_block(part, size_b, &mass);
  record.a = mass / static_cast<double>(size_b);
  record.x_after = average_portion(state_, part.members);
  record.a_grid = snap_down(record.a, fp);
  record.expressions = branch_values(prev, record.x_before, record.a_grid);
  record.branch = record.expressions.chosen();
  part.steps_remaining = k - 1;

  if (record.branch == Branch::aggressive) {
    PartitionState spawned;
    spawned.id = next_partition_++;
    spawned.members = block;
    spawned.color = opposite(part.color);
    spawned.steps_remaining = k - 1;
    record.spawned_partition = spawned.id;
    transcript_.steps.push_back(record);
    active_.push_back(std::move(spawned));  // invalidates `part`
    return record.spawned_partition;
  }

  // Conservative: retire B against the |B| least matched vertices of A.
  std::vector<VertexId> by_level(part.members);
  std::stable_sort(by_level.begin(), by_level.end(),
                   [&](VertexId l, VertexId r) { return state_.portion(l) < state_.portion(r); });
  for (std::size_t j = 0; j < size_b; ++j) deactivate(block[j], by_level[j]);
  std::erase_if(part.members, [&](VertexId v) { return inactive_[v.index()] != 0; });
  transcript_.steps.push_back(record);
  return std::nullopt;
}

void Construction::snapshot_sizes() {
  for (const auto& p : active_) transcript_.partition_sizes.push_back({p.id, p.members.size(), p.steps_remaining});
}

void Construction::finish() {
  if (!active_.empty()) throw std::logic_error("construction still has active partitions");
  const std::size_t inactive = 2 * transcript_.deactivations.size();
  if (inactive != state_.vertex_count()) throw std::logic_error("some vertex was never deactivated");
  const double sum = state_.total_portion();
  const double gamma = params_.fparams.gamma;
  transcript_.v_alg = 0.5 * (sum - gamma * static_cast<double>(inactive));
  transcript_.alg_total = 0.5 * sum;
  transcript_.opt_size = transcript_.deactivations.size();
}

RunResult run_construction(const AdversaryParams& params, OnlineAlgorithm& alg, std::span<const FGrid> grids,
                           const AdversaryOptions& options) {
  if (grids.size() < params.n) throw DomainError("need value grids F_1 .. F_n");
  for (std::size_t i = 0; i < params.n; ++i) {
    if (grids[i].n != i + 1 || !same_params(grids[i].params, params.fparams)) {
      throw DomainError("value grids do not match the parameters");
    }
  }

  Construction run(params, alg, options);
  auto ids_with = [&](std::size_t k) {
    std::vector<std::size_t> ids;
    for (const auto& p : run.active()) {
      if (p.steps_remaining == k) ids.push_back(p.id);
    }
    return ids;
  };
  for (std::size_t k = params.n; k >= 2; --k) {
    run.snapshot_sizes();
    for (std::size_t id : ids_with(k)) run.recursive_step(id, grids[k - 2]);
  }
  run.snapshot_sizes();
  for (std::size_t id : ids_with(1)) run.base_step(id);
  run.finish();

  RunResult out{std::move(run).release_transcript(), MatchState{}};
  out.transcript.value_bound = grids[params.n - 1](params.x0) * static_cast<double>(params.N);
  out.state = std::move(run).release_state();
  return out;
}

RunResult run_construction(const AdversaryParams& params, OnlineAlgorithm& alg, const AdversaryOptions& options) {
  const auto grids = f_sequence(params.fparams, params.n);
  return run_construction(params, alg, grids, options);
}

StructureReport check_structure(const Transcript& t, const MatchState& state) {
  StructureReport report;
  report.vertices = state.vertex_count();
  if (t.colors.size() != report.vertices) {
    throw StructureViolation(StructureClaim::bipartite, "coloring does not cover every vertex");
  }
  state.for_each_edge([&](VertexId later, VertexId earlier, double) {
    ++report.edges;
    if (t.colors[later.index()] == t.colors[earlier.index()]) {
      throw StructureViolation(StructureClaim::bipartite, "edge (" + std::to_string(earlier.value) + ", " +
                                                              std::to_string(later.value) + ") joins one color");
    }
  });

  std::vector<char> covered(report.vertices, 0);
  for (const auto& [u, v] : t.deactivations) {
    if (u.index() >= report.vertices || v.index() >= report.vertices) {
      throw StructureViolation(StructureClaim::perfect_matching, "pair names an unknown vertex");
    }
    if (covered[u.index()] || covered[v.index()] || u == v) {
      throw StructureViolation(StructureClaim::perfect_matching,
                               "vertex " + std::to_string(covered[u.index()] ? u.value : v.value) +
                                   " is in two pairs");
    }
    if (!state.has_edge(u, v)) {
      throw StructureViolation(StructureClaim::perfect_matching,
                               "pair (" + std::to_string(u.value) + ", " + std::to_string(v.value) +
                                   ") is not an edge");
    }
    covered[u.index()] = covered[v.index()] = 1;
  }
  const auto missing = std::find(covered.begin(), covered.end(), 0);
  if (missing != covered.end()) {
    throw StructureViolation(StructureClaim::perfect_matching,
                             "vertex " + std::to_string(missing - covered.begin()) + " is unpaired");
  }
  report.pairs = t.deactivations.size();

  const std::size_t inv_eps = t.params.fparams.inv_eps;
  for (const auto& s : t.partition_sizes) {
    if (s.size % AdversaryParams::minimal_vertices(s.steps_remaining, inv_eps) != 0) {
      throw StructureViolation(StructureClaim::divisibility,
                               "partition " + std::to_string(s.partition) + " has size " + std::to_string(s.size) +
                                   " with " + std::to_string(s.steps_remaining) + " steps left");
    }
  }

  for (std::size_t i = 0; i < report.vertices; ++i) {
    const double x = state.portions()[i];
    report.max_portion = std::max(report.max_portion, x);
    if (x > 1.0 + kFeasibilityTol || x < -kFeasibilityTol) {
      throw StructureViolation(StructureClaim::feasibility, "vertex " + std::to_string(i) + " is at " +
                                                                std::to_string(x));
    }
  }
  return report;
}

}  // namespace matchbound
