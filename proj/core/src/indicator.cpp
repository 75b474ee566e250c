#include <algorithm>
#include <cmath>

#include "proxmag/regularizers.hpp"

namespace proxmag {
namespace {

void check_box(std::size_t n, std::span<const double> lo, std::span<const double> hi) {
  if (lo.size() != n || hi.size() != n) throw InvalidInput("box indicator: bound size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(lo[i]) || std::isnan(hi[i]) || lo[i] > hi[i]) {
      throw InvalidInput("box indicator: need lo <= hi elementwise");
    }
  }
}

bool inside(double x, double lo, double hi) {
  const double slack = kIndicatorSlack * std::max({1.0, std::abs(lo), std::abs(hi)});
  return x >= lo - slack && x <= hi + slack;
}

}  // namespace

std::vector<double> indicator_box_prox(std::span<const double> x, std::span<const double> lo,
                                       std::span<const double> hi) {
  check_box(x.size(), lo, hi);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::clamp(x[i], lo[i], hi[i]);
  return out;
}

double indicator_set_eval(std::span<const double> x, std::span<const double> lo,
                          std::span<const double> hi) {
  check_box(x.size(), lo, hi);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!inside(x[i], lo[i], hi[i])) return kInfinity;
  }
  return 0.0;
}

BoxIndicator::BoxIndicator(Shape shape, double lo, double hi)
    : BoxIndicator(shape, std::vector<double>(shape.size(), lo),
                   std::vector<double>(shape.size(), hi)) {}

BoxIndicator::BoxIndicator(Shape shape, std::vector<double> lo, std::vector<double> hi)
    : shape_(shape), lo_(std::move(lo)), hi_(std::move(hi)) {
  check_box(shape_.size(), lo_, hi_);
}

double BoxIndicator::eval(std::span<const double> x) const { return indicator_set_eval(x, lo_, hi_); }

void BoxIndicator::prox(std::span<const double> x, double, std::span<double> out) const {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::clamp(x[i], lo_[i], hi_[i]);
}

}  // namespace proxmag
