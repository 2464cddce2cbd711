#include "matchbound/f_recursion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <thread>

#include "matchbound/errors.hpp"

namespace matchbound {

namespace {

std::size_t integral_inverse(double value, const char* what) {
  const double inv = 1.0 / value;
  const double rounded = std::round(inv);
  if (!(rounded >= 1.0) || std::abs(inv - rounded) > 1e-9 * rounded) {
    throw DomainError(std::string(what) + " must be the reciprocal of a positive integer");
  }
  return static_cast<std::size_t>(rounded);
}

// Runs body(begin, end) over [0, count) split into contiguous chunks.
template <typename Body>
void parallel_rows(std::size_t count, unsigned threads, Body&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads == 1) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> workers;
  const std::size_t chunk = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&body, begin, end] { body(begin, end); });
  }
}

}  // namespace

FParams FParams::make(double eps, double gamma, double grid_step) {
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("eps must lie in (0, 1]");
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0, 1)");
  if (!(grid_step > 0.0 && grid_step <= eps)) throw DomainError("grid step must lie in (0, eps]");
  FParams p;
  p.eps = eps;
  p.gamma = gamma;
  p.grid_step = grid_step;
  p.inv_eps = integral_inverse(eps, "eps");
  p.intervals = integral_inverse(grid_step, "grid step");
  if (p.intervals % p.inv_eps != 0) throw DomainError("eps must be a multiple of the grid step");
  return p;
}

const char* to_string(Branch branch) {
  switch (branch) {
    case Branch::none: return "none";
    case Branch::aggressive: return "aggressive";
    case Branch::conservative: return "conservative";
  }
  return "unknown";
}

double FGrid::operator()(double x) const {
  const std::size_t m = params.intervals;
  if (x <= 0.0) return values.front();
  if (x >= 1.0) return values.back();
  const double pos = x * static_cast<double>(m);
  auto i = static_cast<std::size_t>(pos);
  if (i >= m) return values.back();
  const double frac = pos - static_cast<double>(i);
  return values[i] + frac * (values[i + 1] - values[i]);
}

BranchValues branch_values(const FGrid& prev, double x, double a) {
  const double eps = prev.params.eps;
  const double shifted = prev(x + eps * a);
  BranchValues out;
  out.aggressive = shifted + eps * prev(a);
  out.conservative =
      (1.0 - eps) * shifted + eps * (((1.0 + eps) * a + x) / 2.0 - prev.params.gamma);
  return out;
}

double f1(double x, double gamma) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("F_1 is defined on [0, 1]");
  return 1.0 - x / 2.0 - gamma;
}

FGrid f_first(const FParams& params) {
  FGrid grid;
  grid.params = params;
  grid.n = 1;
  const std::size_t m = params.intervals;
  grid.values.resize(m + 1);
  grid.argmax_a.resize(m + 1);
  grid.branch.assign(m + 1, Branch::none);
  for (std::size_t i = 0; i <= m; ++i) {
    const double x = params.x(i);
    grid.values[i] = f1(x, params.gamma);
    grid.argmax_a[i] = 1.0 - x;  // the base step saturates the partition
  }
  return grid;
}

FGrid f_next(const FGrid& prev, unsigned threads) {
  const FParams& p = prev.params;
  const std::size_t m = p.intervals;
  const std::size_t q = p.inv_eps;
  const double eps = p.eps;
  const auto& v = prev.values;

  FGrid next;
  next.params = p;
  next.n = prev.n + 1;
  next.values.resize(m + 1);
  next.argmax_a.resize(m + 1);
  next.branch.resize(m + 1);

  parallel_rows(m + 1, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double x = p.x(i);
      // x + εa ≤ 1  ⇔  i·q + j ≤ m·q
      const std::size_t j_max = std::min(m, (m - i) * q);
      double best = -std::numeric_limits<double>::infinity();
      std::size_t best_j = 0;
      Branch best_branch = Branch::aggressive;
      for (std::size_t j = 0; j <= j_max; ++j) {
        // F_n(x + εa) sits j/q cells to the right of x.
        const std::size_t cell = i + j / q;
        const std::size_t rem = j % q;
        const double shifted =
            rem == 0 ? v[cell]
                     : v[cell] + (static_cast<double>(rem) / static_cast<double>(q)) * (v[cell + 1] - v[cell]);
        const double a = p.x(j);
        const double aggressive = shifted + eps * v[j];
        const double conservative = (1.0 - eps) * shifted + eps * (((1.0 + eps) * a + x) / 2.0 - p.gamma);
        const double value = std::min(aggressive, conservative);
        if (value > best) {
          best = value;
          best_j = j;
          best_branch = aggressive <= conservative ? Branch::aggressive : Branch::conservative;
        }
      }
      next.values[i] = best;
      next.argmax_a[i] = p.x(best_j);
      next.branch[i] = best_branch;
    }
  });
  return next;
}

std::vector<FGrid> f_sequence(const FParams& params, std::size_t n, unsigned threads) {
  if (n == 0) throw DomainError("need at least one step");
  std::vector<FGrid> grids;
  grids.reserve(n);
  grids.push_back(f_first(params));
  while (grids.size() < n) grids.push_back(f_next(grids.back(), threads));
  return grids;
}

std::optional<NegativeStep> find_negative_n(const FParams& params, std::size_t n_max,
                                            unsigned threads) {
  if (n_max == 0) throw DomainError("n_max must be at least 1");
  FGrid grid = f_first(params);
  for (std::size_t n = 1;; ++n) {
    if (grid.values.front() < kNegativeThreshold) return NegativeStep{n, grid.values.front()};
    if (n == n_max) return std::nullopt;
    grid = f_next(grid, threads);
  }
}

ClaimReport certify_claims(std::span<const FGrid> grids) {
  if (grids.empty()) throw DomainError("no grids to certify");
  const FParams& p = grids.front().params;
  const double h = p.grid_step;
  ClaimReport report;
  report.tolerance = 2.0 * h;
  report.monotone_violation = -std::numeric_limits<double>::infinity();
  report.concavity_violation = -std::numeric_limits<double>::infinity();
  report.lipschitz_violation = -std::numeric_limits<double>::infinity();

  for (std::size_t g = 0; g < grids.size(); ++g) {
    const auto& grid = grids[g];
    if (grid.params.eps != p.eps || grid.params.gamma != p.gamma || grid.params.grid_step != h) {
      throw DomainError("grids must share parameters");
    }
    if (g > 0 && grid.n != grids[g - 1].n + 1) throw DomainError("grids must have consecutive n");
    const auto& v = grid.values;
    for (std::size_t i = 1; i < v.size(); ++i) {
      report.lipschitz_violation = std::max(report.lipschitz_violation, std::abs(v[i] - v[i - 1]) - h / 2.0);
      if (i + 1 < v.size()) {
        report.concavity_violation = std::max(report.concavity_violation, v[i + 1] - 2.0 * v[i] + v[i - 1]);
      }
    }
    if (g > 0) {
      const auto& before = grids[g - 1].values;
      for (std::size_t i = 0; i < v.size(); ++i) {
        report.monotone_violation = std::max(report.monotone_violation, v[i] - before[i]);
      }
    }
  }
  if (grids.size() == 1) report.monotone_violation = 0.0;
  return report;
}

void write_f_csv(std::ostream& out, std::span<const FGrid> grids) {
  const auto old_precision = out.precision(12);
  out << "n,x,F,argmax_a,branch\n";
  for (const auto& grid : grids) {
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
      out << grid.n << ',' << grid.params.x(i) << ',' << grid.values[i] << ',' << grid.argmax_a[i] << ','
          << to_string(grid.branch[i]) << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace matchbound
