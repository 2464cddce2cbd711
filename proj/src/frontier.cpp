#include "matchbound/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "matchbound/errors.hpp"

namespace matchbound {

namespace {

constexpr double kInvGoldenRatio = 0.6180339887498949;

std::size_t unit_intervals(double grid_step) {
  if (!(grid_step > 0.0) || grid_step > 1.0) throw DomainError("grid step must lie in (0, 1]");
  const double inv = 1.0 / grid_step;
  const double rounded = std::round(inv);
  if (std::abs(inv - rounded) > 1e-9 * rounded) throw DomainError("grid step must divide 1");
  return static_cast<std::size_t>(rounded);
}

}  // namespace

FrontierConstants FrontierConstants::from(double gamma, double k) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0, 1)");
  if (!(k >= 1.0) || !std::isfinite(k)) throw DomainError("k must be a finite real >= 1");
  FrontierConstants out;
  out.gamma = gamma;
  out.k = k;
  out.r1 = gamma * (1.0 + k) / 2.0;
  out.r2 = gamma * (1.0 - k) / 2.0;
  out.alpha1 = (k - 1.0) / (2.0 * k);
  out.alpha2 = (k + 1.0) / (2.0 * k);
  out.c = (k * k - 1.0) * gamma * gamma / (4.0 * (1.0 - gamma));
  return out;
}

double gamma_objective(double k) {
  if (!(k >= 1.0) || !std::isfinite(k)) throw DomainError("gamma_objective needs finite k >= 1");
  if (k == 1.0) return 0.5;
  const double upper = std::pow((k + 1.0) / 2.0, (k + 1.0) / (2.0 * k));
  const double lower = std::pow((k - 1.0) / 2.0, (k - 1.0) / (2.0 * k));
  return 1.0 / (upper * lower + 1.0);
}

GammaStar compute_gamma_star(double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");

  // Grow the bracket until the objective has turned down at its right end.
  double lo = 1.0;
  double hi = 4.0;
  for (int guard = 0; guard < 64; ++guard) {
    const double mid = 0.5 * (lo + hi);
    if (gamma_objective(hi) < gamma_objective(mid)) break;
    lo = mid;
    hi *= 2.0;
  }

  double c = hi - kInvGoldenRatio * (hi - lo);
  double d = lo + kInvGoldenRatio * (hi - lo);
  double fc = gamma_objective(c);
  double fd = gamma_objective(d);
  while (hi - lo > tol) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvGoldenRatio * (hi - lo);
      fc = gamma_objective(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvGoldenRatio * (hi - lo);
      fd = gamma_objective(d);
    }
  }
  GammaStar out;
  out.k_star = 0.5 * (lo + hi);
  out.gamma_star = gamma_objective(out.k_star);
  return out;
}

double h_closed_form(double y, const FrontierConstants& constants) {
  const double gamma = constants.gamma;
  if (!(y >= -1e-12 && y <= gamma + 1e-12)) {
    throw DomainError("H is defined on [0, gamma]; got y = " + std::to_string(y));
  }
  y = std::clamp(y, 0.0, gamma);
  if (constants.c == 0.0) return y;
  const double left = (constants.r1 - y) / constants.r1;
  const double right = (y - constants.r2) / (-constants.r2);
  return y + constants.c * std::pow(left, constants.alpha1) * std::pow(right, constants.alpha2);
}

FrontierFunctions build_frontier(double gamma, double k, double grid_step) {
  const std::size_t m = unit_intervals(grid_step);
  const auto constants = FrontierConstants::from(gamma, k);

  const auto hy_intervals =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(gamma / grid_step - 1e-9)));
  auto H = Tabulated::sample(0.0, gamma, hy_intervals,
                             [&](double y) { return h_closed_form(y, constants); });
  for (std::size_t j = 1; j < H.size(); ++j) {
    if (!(H[j] > H[j - 1])) {
      throw NonInvertible("H is not strictly increasing near y = " + std::to_string(H.point(j)));
    }
  }

  const double h_top = h_closed_form(gamma, constants);
  auto inverse = [&](double x) {
    if (x <= constants.c) return 0.0;
    if (x >= h_top) return gamma + (x - h_top);
    double lo = 0.0;
    double hi = gamma;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (h_closed_form(mid, constants) < x) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  auto G = Tabulated::sample(0.0, 1.0, m, inverse);

  std::vector<double> g(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    double slope = 0.0;
    if (i == 0) {
      slope = (G[1] - G[0]) / grid_step;
    } else if (i == m) {
      slope = (G[m] - G[m - 1]) / grid_step;
    } else {
      slope = (G[i + 1] - G[i - 1]) / (2.0 * grid_step);
    }
    g[i] = std::clamp(slope, 0.0, 1.0);
  }

  std::vector<double> a(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    // At x = 1 the neighbor is saturated and the threshold is never consulted.
    if (i == m || g[i] >= 1.0) {
      a[i] = 0.0;
      continue;
    }
    a[i] = std::clamp((gamma - G[i]) / (1.0 - g[i]), 0.0, 1.0);
  }

  FrontierFunctions out;
  out.constants = constants;
  out.H = std::move(H);
  out.G = std::move(G);
  out.g = Tabulated(0.0, 1.0, std::move(g));
  out.a = Tabulated(0.0, 1.0, std::move(a));
  out.grid_step = grid_step;
  return out;
}

FrontierFunctions optimal_frontier(double grid_step, double tol) {
  const auto star = compute_gamma_star(tol);
  return build_frontier(star.gamma_star, star.k_star, grid_step);
}

FactReport verify_fact_tz(const Tabulated& a, const Tabulated& g, double gamma) {
  if (a.size() != g.size() || a.lo() != g.lo() || a.hi() != g.hi()) {
    throw DomainError("a and g must share one grid");
  }
  const auto cum = g.cumulative_integral();
  FactReport report;
  report.max_violation_1 = -INFINITY;
  report.max_violation_2 = -INFINITY;
  report.certified_gamma = INFINITY;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double gain = a[i] * (1.0 - g[i]);
    report.max_violation_1 = std::max(report.max_violation_1, cum(a[i]) - gain);
    const double lhs2 = gain + cum[i];
    report.max_violation_2 = std::max(report.max_violation_2, gamma - lhs2);
    report.certified_gamma = std::min(report.certified_gamma, lhs2);
  }
  return report;
}

FactReport verify_fact_tz(const FrontierFunctions& f) {
  return verify_fact_tz(f.a, f.g, f.constants.gamma);
}

Tabulated h_fixed_point(const Tabulated& H0, double r, std::size_t iterations) {
  if (H0.lo() != 0.0 || std::abs(H0.hi() - r) > 1e-12) {
    throw DomainError("H0 must be tabulated on [0, r]");
  }
  Tabulated current = H0;
  const std::size_t m = H0.intervals();
  std::vector<double> ratio(m + 1);
  for (std::size_t it = 0; it < iterations; ++it) {
    for (std::size_t j = 0; j <= m; ++j) {
      const double w = current.point(j);
      const double denom = current[j] - w;
      if (!(denom > 1e-12)) {
        throw SingularDenominator("H(w) - w vanishes at w = " + std::to_string(w));
      }
      ratio[j] = current[j] / denom;
    }
    const auto cum = Tabulated(0.0, r, ratio).cumulative_integral();
    std::vector<double> next(m + 1);
    // r − y_j is the grid point m − j.
    for (std::size_t j = 0; j <= m; ++j) next[j] = 1.0 - cum[m - j];
    current = Tabulated(0.0, r, std::move(next));
  }
  return current;
}

void write_h_csv(std::ostream& out, const FrontierFunctions& f) {
  const auto old_precision = out.precision(12);
  out << "y,H\n";
  for (std::size_t j = 0; j < f.H.size(); ++j) out << f.H.point(j) << ',' << f.H[j] << '\n';
  out.precision(old_precision);
}

void write_g_csv(std::ostream& out, const FrontierFunctions& f) {
  const auto old_precision = out.precision(12);
  out << "x,G,g,a\n";
  for (std::size_t i = 0; i < f.G.size(); ++i) {
    out << f.G.point(i) << ',' << f.G[i] << ',' << f.g[i] << ',' << f.a[i] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace matchbound
