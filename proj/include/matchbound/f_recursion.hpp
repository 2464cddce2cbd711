#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace matchbound {

// Shared parameters of the value-function recursion. 1/eps and 1/grid_step
// are integers and eps is a multiple of grid_step, so x + eps·a for grid x, a
// always falls on a known fraction of a grid cell.
struct FParams {
  double eps = 0.5;
  double gamma = 0.6;
  double grid_step = 1e-3;
  std::size_t inv_eps = 2;
  std::size_t intervals = 1000;

  // Throws DomainError when a divisibility or range constraint fails.
  static FParams make(double eps, double gamma, double grid_step = 1e-3);

  double x(std::size_t i) const noexcept {
    return static_cast<double>(i) / static_cast<double>(intervals);
  }
};

enum class Branch : std::uint8_t { none, aggressive, conservative };

const char* to_string(Branch branch);

// F_n tabulated on the unit grid together with the maximizing action and the
// expression that attained the min there.
struct FGrid {
  FParams params;
  std::size_t n = 1;
  std::vector<double> values;
  std::vector<double> argmax_a;
  std::vector<Branch> branch;

  // Linear interpolation; x is clamped to [0, 1].
  double operator()(double x) const;
};

// The two continuations compared at a step with k remaining, given F_{k−1}:
//   aggressive   = F(x + εa) + ε·F(a)
//   conservative = (1−ε)·F(x + εa) + ε·(((1+ε)a + x)/2 − Γ)
struct BranchValues {
  double aggressive = 0.0;
  double conservative = 0.0;

  // Ties go to the aggressive continuation.
  Branch chosen() const noexcept {
    return aggressive <= conservative ? Branch::aggressive : Branch::conservative;
  }
  double value() const noexcept { return aggressive <= conservative ? aggressive : conservative; }
};

BranchValues branch_values(const FGrid& prev, double x, double a);

// F_1(x) = 1 − x/2 − Γ. Throws DomainError outside [0, 1].
double f1(double x, double gamma);

FGrid f_first(const FParams& params);

// F_{n+1} from F_n: grid maximization over a ∈ {0, h, ..., 1} with x + εa ≤ 1,
// smallest maximizing a on ties. Rows are split over `threads` workers.
FGrid f_next(const FGrid& prev, unsigned threads = 1);

// F_1, ..., F_n.
std::vector<FGrid> f_sequence(const FParams& params, std::size_t n, unsigned threads = 1);

// Below this, F_n(0) counts as negative.
inline constexpr double kNegativeThreshold = -1e-9;

struct NegativeStep {
  std::size_t n = 0;
  double value = 0.0;
};

// Smallest n ≤ n_max with F_n(0) < kNegativeThreshold.
std::optional<NegativeStep> find_negative_n(const FParams& params, std::size_t n_max,
                                            unsigned threads = 1);

struct ClaimReport {
  double monotone_violation = 0.0;    // max F_{n+1}(x) − F_n(x)
  double concavity_violation = 0.0;   // max second difference
  double lipschitz_violation = 0.0;   // max |ΔF| − h/2
  double tolerance = 0.0;             // 2·grid_step

  bool monotone_ok() const noexcept { return monotone_violation <= tolerance; }
  bool concavity_ok() const noexcept { return concavity_violation <= tolerance; }
  bool lipschitz_ok() const noexcept { return lipschitz_violation <= tolerance; }
  bool passed() const noexcept { return monotone_ok() && concavity_ok() && lipschitz_ok(); }
};

// Grids must share parameters and have consecutive n.
ClaimReport certify_claims(std::span<const FGrid> grids);

// Rows (n, x, F_n(x), argmax_a, branch) with a header, 12 significant digits.
void write_f_csv(std::ostream& out, std::span<const FGrid> grids);

}  // namespace matchbound
