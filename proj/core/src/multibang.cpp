#include <algorithm>
#include <cmath>

#include "proxmag/regularizers.hpp"

namespace proxmag {

MultiBangLevels::MultiBangLevels(std::vector<double> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw InvalidInput("MultiBangLevels: at least one level required");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (!std::isfinite(levels_[i])) throw InvalidInput("MultiBangLevels: levels must be finite");
    if (i > 0 && !(levels_[i] > levels_[i - 1])) {
      throw InvalidInput("MultiBangLevels: levels must be strictly increasing");
    }
  }
}

double multibang_eval(std::span<const double> x, const MultiBangLevels& levels) {
  const auto& a = levels.values();
  double s = 0.0;
  for (double v : x) {
    if (v < a.front() || v > a.back()) return kInfinity;
    auto it = std::upper_bound(a.begin(), a.end(), v);
    if (it == a.end()) continue;  // v == a.back()
    const double hi = *it;
    const double lo = *(it - 1);
    s += (hi - v) * (v - lo);
  }
  return s;
}

double multibang_prox_scalar(double x, const MultiBangLevels& levels, double tau) {
  if (!(tau > 0.0 && tau < 0.5)) throw InvalidInput("multibang_prox: tau must lie in (0, 1/2)");
  const auto& a = levels.values();
  const std::size_t k = a.size();
  for (std::size_t i = 0; i < k; ++i) {
    const double upper = i + 1 < k ? a[i] + tau * (a[i + 1] - a[i]) : kInfinity;
    if (x <= upper) {
      const double lower = i > 0 ? a[i] - tau * (a[i] - a[i - 1]) : -kInfinity;
      if (x >= lower) return a[i];
      // Gap (a_{i-1}, a_i).
      return (x - tau * (a[i - 1] + a[i])) / (1.0 - 2.0 * tau);
    }
  }
  return a.back();
}

std::vector<double> multibang_prox(std::span<const double> x, const MultiBangLevels& levels,
                                   double tau) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = multibang_prox_scalar(x[i], levels, tau);
  return out;
}

MultiBang::MultiBang(Shape shape, MultiBangLevels levels, double lambda)
    : shape_(shape), levels_(std::move(levels)), lambda_(lambda) {
  if (!(lambda_ > 0.0)) throw InvalidInput("MultiBang: lambda must be > 0");
}

double MultiBang::eval(std::span<const double> x) const {
  const double m = multibang_eval(x, levels_);
  return std::isfinite(m) ? lambda_ * m : m;
}

void MultiBang::prox(std::span<const double> x, double step, std::span<double> out) const {
  const double tau = step * lambda_;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = multibang_prox_scalar(x[i], levels_, tau);
}

}  // namespace proxmag
