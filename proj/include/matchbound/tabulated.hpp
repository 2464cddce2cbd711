#pragma once

#include <cstddef>
#include <vector>

namespace matchbound {

// Function sampled on a uniform grid over [lo, hi], evaluated by linear
// interpolation. Arguments outside the range are clamped to the end points.
class Tabulated {
public:
  Tabulated() = default;
  Tabulated(double lo, double hi, std::vector<double> values);

  // Samples f on `intervals + 1` equally spaced points.
  template <typename F>
  static Tabulated sample(double lo, double hi, std::size_t intervals, F&& f) {
    std::vector<double> values(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
      values[i] = f(point_of(lo, hi, intervals, i));
    }
    return Tabulated(lo, hi, std::move(values));
  }

  double operator()(double x) const;

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double step() const noexcept { return step_; }
  std::size_t intervals() const noexcept { return values_.size() - 1; }
  std::size_t size() const noexcept { return values_.size(); }
  double point(std::size_t i) const noexcept { return point_of(lo_, hi_, intervals(), i); }

  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  // Cumulative composite trapezoid: result[i] = ∫_lo^{point(i)} f.
  Tabulated cumulative_integral() const;

private:
  static double point_of(double lo, double hi, std::size_t intervals, std::size_t i) {
    if (i == intervals) return hi;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(intervals);
  }

  double lo_ = 0.0;
  double hi_ = 1.0;
  double step_ = 1.0;
  std::vector<double> values_{0.0, 0.0};
};

}  // namespace matchbound
