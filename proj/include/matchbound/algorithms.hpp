#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "matchbound/core_model.hpp"
#include "matchbound/frontier.hpp"
#include "matchbound/tabulated.hpp"

namespace matchbound {

// Non-increasing stopping rule a: [0,1] → [0,1] on a uniform grid, evaluated
// by linear interpolation.
class ThresholdFunction {
public:
  // Throws DomainError unless values lie in [0,1] and are non-increasing within 1e-9.
  explicit ThresholdFunction(std::vector<double> table);

  static ThresholdFunction constant(double level);
  // Smallest non-increasing table dominating `a` pointwise.
  static ThresholdFunction upper_envelope(const Tabulated& a);

  double operator()(double level) const { return table_(level); }
  const Tabulated& table() const noexcept { return table_; }

private:
  Tabulated table_;
};

// Continuous water-filling of one arriving vertex at level `u_level` into
// neighbors at `neighbor_levels`: mass always flows into the least matched
// neighbors (split evenly across ties) until the arriving level reaches
// stop(min neighbor level) or every neighbor is at 1. Returns the increment
// received by each neighbor; their sum is the mass the arriving vertex gains.
std::vector<double> water_fill(double u_level, std::span<const double> neighbor_levels,
                               const ThresholdFunction& stop);

// How an algorithm distributes the required initial mean over isolated vertices.
enum class InitPolicy {
  uniform,  // every vertex at the mean
  skewed,   // fill vertices to 1 in id order, one partial vertex, rest at 0
};

std::vector<double> initial_portions(std::size_t count, double mean, InitPolicy policy);

// Processes each arriving vertex of a batch in ascending id order with water_fill.
class WaterFillingAlgorithm final : public OnlineAlgorithm {
public:
  WaterFillingAlgorithm(std::string name, ThresholdFunction stop, InitPolicy init = InitPolicy::uniform);

  std::string name() const override { return name_; }
  std::vector<double> on_init(std::size_t count, double mean) override;
  AlgorithmDecision on_arrival(const ArrivalEvent& event, const MatchState& view) override;

private:
  std::string name_;
  ThresholdFunction stop_;
  InitPolicy init_;
};

// Spreads a·|batch| mass evenly over the revealed edges, each edge capped so
// that no endpoint exceeds 1.
class EvenSplitAlgorithm final : public OnlineAlgorithm {
public:
  EvenSplitAlgorithm(std::string name, double level, InitPolicy init = InitPolicy::uniform);

  std::string name() const override { return name_; }
  std::vector<double> on_init(std::size_t count, double mean) override;
  AlgorithmDecision on_arrival(const ArrivalEvent& event, const MatchState& view) override;

private:
  std::string name_;
  double level_;
  InitPolicy init_;
};

// Water-filling driven by the frontier threshold (its non-increasing envelope).
std::unique_ptr<OnlineAlgorithm> tz_algorithm(const FrontierFunctions& frontier,
                                              InitPolicy init = InitPolicy::uniform);

enum class BaselineKind { greedy, fixed_level, even_split };

std::unique_ptr<OnlineAlgorithm> baseline(BaselineKind kind, double param = 0.0,
                                          InitPolicy init = InitPolicy::uniform);

struct AlgorithmContext {
  // Frontier for "tz"; the optimal frontier at grid 1e-4 is built when absent.
  std::shared_ptr<const FrontierFunctions> frontier;
  InitPolicy init = InitPolicy::uniform;
};

// Registry: "tz", "greedy", "fixed:<c>", "evensplit:<a>", and "overfill", a
// negative control that saturates every revealed edge regardless of capacity.
// Throws DomainError on an unknown or malformed name.
std::unique_ptr<OnlineAlgorithm> make_algorithm(std::string_view name, const AlgorithmContext& context = {});

// tz, greedy, fixed:{0, 0.3, 0.7}, evensplit:{0.2, 0.5, 1.0}.
std::vector<std::string> default_fleet();

}  // namespace matchbound
