#include "matchbound/algorithms.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>

#include "matchbound/errors.hpp"

namespace matchbound {

namespace {

constexpr double kCrossingTol = 1e-12;

double parse_unit_fraction(std::string_view text, std::string_view name) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || !(value >= 0.0 && value <= 1.0)) {
    throw DomainError("algorithm '" + std::string(name) + "' needs a parameter in [0, 1]");
  }
  return value;
}

// Saturates every revealed edge; exists to exercise the feasibility checks.
class OverfillAlgorithm final : public OnlineAlgorithm {
public:
  std::string name() const override { return "overfill"; }
  std::vector<double> on_init(std::size_t count, double mean) override {
    return initial_portions(count, mean, InitPolicy::uniform);
  }
  AlgorithmDecision on_arrival(const ArrivalEvent& event, const MatchState&) override {
    AlgorithmDecision decision;
    for (const auto& u : event.batch) {
      for (VertexId v : *u.neighbors) decision.increments.push_back({u.id, v, 1.0});
    }
    return decision;
  }
};

std::shared_ptr<const FrontierFunctions> default_frontier() {
  static std::once_flag once;
  static std::shared_ptr<const FrontierFunctions> frontier;
  std::call_once(once, [] { frontier = std::make_shared<const FrontierFunctions>(optimal_frontier()); });
  return frontier;
}

}  // namespace

ThresholdFunction::ThresholdFunction(std::vector<double> table) : table_(0.0, 1.0, std::move(table)) {
  const auto& v = table_.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0 && v[i] <= 1.0)) throw DomainError("threshold values must lie in [0, 1]");
    if (i > 0 && v[i] > v[i - 1] + 1e-9) throw DomainError("threshold must be non-increasing");
  }
}

ThresholdFunction ThresholdFunction::constant(double level) {
  return ThresholdFunction(std::vector<double>{level, level});
}

ThresholdFunction ThresholdFunction::upper_envelope(const Tabulated& a) {
  if (a.lo() != 0.0 || a.hi() != 1.0) throw DomainError("threshold must be tabulated on [0, 1]");
  std::vector<double> env(a.values());
  for (std::size_t i = env.size() - 1; i-- > 0;) env[i] = std::max(env[i], env[i + 1]);
  return ThresholdFunction(std::move(env));
}

std::vector<double> water_fill(double u_level, std::span<const double> neighbor_levels,
                               const ThresholdFunction& stop) {
  const std::size_t d = neighbor_levels.size();
  std::vector<double> increments(d, 0.0);
  if (d == 0) return increments;

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return neighbor_levels[l] < neighbor_levels[r]; });

  // The first m neighbors in `order` form the current minimum group at `level`.
  double level = neighbor_levels[order[0]];
  std::size_t m = 0;
  auto absorb_ties = [&] {
    while (m < d && neighbor_levels[order[m]] <= level) ++m;
  };
  absorb_ties();

  double x_u = u_level;
  while (level < 1.0 && x_u < stop(level)) {
    const double next = m < d ? std::min(neighbor_levels[order[m]], 1.0) : 1.0;
    const double group = static_cast<double>(m);
    const double span = group * (next - level);
    // Along the segment x_u rises at rate 1 and the group at rate 1/m.
    auto overshoot = [&](double t) { return x_u + t - stop(level + t / group); };
    if (overshoot(span) < 0.0) {
      x_u += span;
      level = next;
      absorb_ties();
      continue;
    }
    double lo = 0.0;
    double hi = span;
    while (hi - lo > kCrossingTol) {
      const double mid = 0.5 * (lo + hi);
      if (overshoot(mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double t = 0.5 * (lo + hi);
    x_u += t;
    level += t / group;
    break;
  }

  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t j = order[r];
    increments[j] = std::max(0.0, level - neighbor_levels[j]);
  }
  return increments;
}

std::vector<double> initial_portions(std::size_t count, double mean, InitPolicy policy) {
  if (!(mean >= 0.0 && mean <= 1.0)) throw DomainError("initial mean must lie in [0, 1]");
  if (policy == InitPolicy::uniform) return std::vector<double>(count, mean);
  std::vector<double> out(count, 0.0);
  const double total = mean * static_cast<double>(count);
  const auto full = std::min(count, static_cast<std::size_t>(std::floor(total + 1e-12)));
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(full), 1.0);
  if (full < count) out[full] = std::clamp(total - static_cast<double>(full), 0.0, 1.0);
  return out;
}

WaterFillingAlgorithm::WaterFillingAlgorithm(std::string name, ThresholdFunction stop, InitPolicy init)
    : name_(std::move(name)), stop_(std::move(stop)), init_(init) {}

std::vector<double> WaterFillingAlgorithm::on_init(std::size_t count, double mean) {
  return initial_portions(count, mean, init_);
}

AlgorithmDecision WaterFillingAlgorithm::on_arrival(const ArrivalEvent& event, const MatchState& view) {
  AlgorithmDecision decision;
  // Mass already poured by earlier vertices of this batch.
  std::vector<double> added(view.vertex_count(), 0.0);
  std::vector<double> levels;
  for (const auto& u : event.batch) {
    const auto& nbrs = *u.neighbors;
    levels.resize(nbrs.size());
    for (std::size_t j = 0; j < nbrs.size(); ++j) levels[j] = view.portion(nbrs[j]) + added[nbrs[j].index()];
    const auto poured = water_fill(view.portion(u.id) + added[u.id.index()], levels, stop_);
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
      if (poured[j] <= 0.0) continue;
      decision.increments.push_back({u.id, nbrs[j], poured[j]});
      added[nbrs[j].index()] += poured[j];
      added[u.id.index()] += poured[j];
    }
  }
  return decision;
}

EvenSplitAlgorithm::EvenSplitAlgorithm(std::string name, double level, InitPolicy init)
    : name_(std::move(name)), level_(level), init_(init) {
  if (!(level >= 0.0 && level <= 1.0)) throw DomainError("even-split level must lie in [0, 1]");
}

std::vector<double> EvenSplitAlgorithm::on_init(std::size_t count, double mean) {
  return initial_portions(count, mean, init_);
}

AlgorithmDecision EvenSplitAlgorithm::on_arrival(const ArrivalEvent& event, const MatchState& view) {
  AlgorithmDecision decision;
  const std::size_t edges = event.edge_count();
  if (edges == 0 || level_ == 0.0) return decision;
  const double per_edge = level_ * static_cast<double>(event.batch.size()) / static_cast<double>(edges);

  std::vector<std::size_t> fresh_degree(view.vertex_count(), 0);
  for (const auto& u : event.batch) {
    for (VertexId v : *u.neighbors) ++fresh_degree[v.index()];
  }
  for (const auto& u : event.batch) {
    const auto& nbrs = *u.neighbors;
    const double u_room = std::max(0.0, 1.0 - view.portion(u.id)) / static_cast<double>(nbrs.size());
    for (VertexId v : nbrs) {
      const double v_room =
          std::max(0.0, 1.0 - view.portion(v)) / static_cast<double>(fresh_degree[v.index()]);
      const double load = std::min({per_edge, u_room, v_room});
      if (load > 0.0) decision.increments.push_back({u.id, v, load});
    }
  }
  return decision;
}

std::unique_ptr<OnlineAlgorithm> tz_algorithm(const FrontierFunctions& frontier, InitPolicy init) {
  return std::make_unique<WaterFillingAlgorithm>("tz", ThresholdFunction::upper_envelope(frontier.a), init);
}

std::unique_ptr<OnlineAlgorithm> baseline(BaselineKind kind, double param, InitPolicy init) {
  switch (kind) {
    case BaselineKind::greedy:
      return std::make_unique<WaterFillingAlgorithm>("greedy", ThresholdFunction::constant(1.0), init);
    case BaselineKind::fixed_level: {
      if (!(param >= 0.0 && param <= 1.0)) throw DomainError("fixed level must lie in [0, 1]");
      std::ostringstream name;
      name << "fixed:" << param;
      return std::make_unique<WaterFillingAlgorithm>(name.str(), ThresholdFunction::constant(param), init);
    }
    case BaselineKind::even_split: {
      std::ostringstream name;
      name << "evensplit:" << param;
      return std::make_unique<EvenSplitAlgorithm>(name.str(), param, init);
    }
  }
  throw DomainError("unknown baseline");
}

std::unique_ptr<OnlineAlgorithm> make_algorithm(std::string_view name, const AlgorithmContext& context) {
  if (name == "tz") {
    const auto frontier = context.frontier ? context.frontier : default_frontier();
    return tz_algorithm(*frontier, context.init);
  }
  if (name == "greedy") return baseline(BaselineKind::greedy, 0.0, context.init);
  if (name == "overfill") return std::make_unique<OverfillAlgorithm>();
  const auto colon = name.find(':');
  if (colon != std::string_view::npos) {
    const auto kind = name.substr(0, colon);
    const auto param = name.substr(colon + 1);
    if (kind == "fixed") {
      return std::make_unique<WaterFillingAlgorithm>(
          std::string(name), ThresholdFunction::constant(parse_unit_fraction(param, name)), context.init);
    }
    if (kind == "evensplit") {
      return std::make_unique<EvenSplitAlgorithm>(std::string(name), parse_unit_fraction(param, name),
                                                  context.init);
    }
  }
  throw DomainError("unknown algorithm '" + std::string(name) + "'");
}

std::vector<std::string> default_fleet() {
  return {"tz", "greedy", "fixed:0", "fixed:0.3", "fixed:0.7", "evensplit:0.2", "evensplit:0.5", "evensplit:1.0"};
}

}  // namespace matchbound
