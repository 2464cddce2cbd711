#include "matchbound/tabulated.hpp"

#include "matchbound/errors.hpp"

namespace matchbound {

Tabulated::Tabulated(double lo, double hi, std::vector<double> values)
    : lo_(lo), hi_(hi), values_(std::move(values)) {
  if (values_.size() < 2 || !(hi > lo)) {
    throw DomainError("tabulated function needs at least two samples on a non-empty range");
  }
  step_ = (hi_ - lo_) / static_cast<double>(values_.size() - 1);
}

double Tabulated::operator()(double x) const {
  if (x <= lo_) return values_.front();
  if (x >= hi_) return values_.back();
  const double pos = (x - lo_) / step_;
  const auto last = values_.size() - 1;
  auto i = static_cast<std::size_t>(pos);
  if (i >= last) return values_.back();
  const double frac = pos - static_cast<double>(i);
  return values_[i] + frac * (values_[i + 1] - values_[i]);
}

Tabulated Tabulated::cumulative_integral() const {
  std::vector<double> cum(values_.size(), 0.0);
  for (std::size_t i = 1; i < values_.size(); ++i) {
    cum[i] = cum[i - 1] + 0.5 * step_ * (values_[i - 1] + values_[i]);
  }
  return Tabulated(lo_, hi_, std::move(cum));
}

}  // namespace matchbound
