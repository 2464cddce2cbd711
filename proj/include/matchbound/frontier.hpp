#pragma once

#include <cstddef>
#include <iosfwd>

#include "matchbound/tabulated.hpp"

namespace matchbound {

// Constants of the closed-form dual potential H at ratio gamma and shape k.
//   r1 = γ(1+k)/2, r2 = γ(1−k)/2, α1 = (k−1)/2k, α2 = (k+1)/2k,
//   c  = (k²−1)γ² / (4(1−γ)) = −r1·r2 / (1−γ) = H(0).
struct FrontierConstants {
  double gamma = 0.0;
  double k = 1.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 1.0;
  double c = 0.0;

  // Throws DomainError unless gamma ∈ (0,1) and k ≥ 1.
  static FrontierConstants from(double gamma, double k);

  // c recomputed through the roots, −r1·r2/(1−γ).
  double c_from_roots() const { return -r1 * r2 / (1.0 - gamma); }
};

// 1 / ( ((k+1)/2)^((k+1)/2k) · ((k−1)/2)^((k−1)/2k) + 1 ); the second factor
// is taken at its limit 1 when k = 1. Throws DomainError for k < 1.
double gamma_objective(double k);

struct GammaStar {
  double k_star = 1.0;
  double gamma_star = 0.5;
};

// Maximizes gamma_objective over k ≥ 1 by bracket expansion and golden-section
// search; the returned k is within `tol` of the maximizer.
GammaStar compute_gamma_star(double tol = 1e-6);

// H(y) = y + c·((r1−y)/r1)^α1 · ((y−r2)/(−r2))^α2 on [0, γ].
double h_closed_form(double y, const FrontierConstants& constants);

struct FrontierFunctions {
  FrontierConstants constants;
  Tabulated H;  // on [0, γ]
  Tabulated G;  // on [0, 1]
  Tabulated g;  // on [0, 1]
  Tabulated a;  // on [0, 1]
  double grid_step = 1e-4;
};

// Tabulates H, its inverse G (0 below H(0) = c, slope 1 above H(γ)), the
// grid derivative g of G clamped to [0,1], and the threshold
// a(x) = min(1, (γ − G(x)) / (1 − g(x))), taken as 0 where g = 1 and at the
// saturated level x = 1. grid_step must divide 1. Throws NonInvertible when
// the tabulated H is not strictly increasing.
FrontierFunctions build_frontier(double gamma, double k, double grid_step);

// build_frontier at (Γ*, k*) with Γ* = gamma_objective(k*).
FrontierFunctions optimal_frontier(double grid_step = 1e-4, double tol = 1e-6);

struct FactReport {
  // max_x [∫_0^{a(x)} g − a(x)(1 − g(x))]; ≤ 0 means condition 1 holds.
  double max_violation_1 = 0.0;
  // max_x [γ − a(x)(1 − g(x)) − ∫_0^x g]; ≤ 0 means condition 2 holds at γ.
  double max_violation_2 = 0.0;
  // min_x [a(x)(1 − g(x)) + ∫_0^x g], the largest ratio condition 2 supports.
  double certified_gamma = 0.0;
};

// Evaluates the two sufficient conditions for water-filling with threshold a
// and dual derivative g on every grid point, with trapezoidal integrals of g.
FactReport verify_fact_tz(const Tabulated& a, const Tabulated& g, double gamma);
FactReport verify_fact_tz(const FrontierFunctions& f);

// Iterates H_{i+1}(y) = 1 − ∫_y^r H_i(r−z) / (H_i(r−z) − (r−z)) dz on the grid
// of H0 (which must span [0, r]). Throws SingularDenominator when some
// H_i(w) − w ≤ 1e-12.
Tabulated h_fixed_point(const Tabulated& H0, double r, std::size_t iterations);

// CSV tables, header row, 12 significant digits.
void write_h_csv(std::ostream& out, const FrontierFunctions& f);
void write_g_csv(std::ostream& out, const FrontierFunctions& f);

}  // namespace matchbound
