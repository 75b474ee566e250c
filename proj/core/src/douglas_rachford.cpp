#include "proxmag/douglas_rachford.hpp"

#include <algorithm>
#include <cmath>

#include "proxmag/core.hpp"

namespace proxmag {

DrState douglas_rachford_loop(const RealProx& prox_a, const RealProx& prox_b,
                              std::span<const double> y0, std::size_t max_iters,
                              const DrStop& stop) {
  const std::size_t n = y0.size();
  DrState s;
  s.y.assign(y0.begin(), y0.end());
  s.x.resize(n);
  prox_a(s.y, s.x);
  if (!all_finite(std::span<const double>(s.x))) throw NumericalError("Douglas-Rachford: non-finite iterate");
  if (stop(s.x, {}, 0)) {
    s.stopped = true;
    return s;
  }

  std::vector<double> reflected(n);
  std::vector<double> b_out(n);
  std::vector<double> x_prev(n);
  while (s.iterations < max_iters) {
    for (std::size_t i = 0; i < n; ++i) reflected[i] = 2.0 * s.x[i] - s.y[i];
    prox_b(reflected, b_out);
    for (std::size_t i = 0; i < n; ++i) s.y[i] += b_out[i] - s.x[i];
    x_prev.swap(s.x);
    prox_a(s.y, s.x);
    ++s.iterations;
    if (!all_finite(std::span<const double>(s.x))) throw NumericalError("Douglas-Rachford: non-finite iterate");

    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(s.x[i] - x_prev[i]));
    s.step_change.push_back(change);

    if (stop(s.x, x_prev, s.iterations)) {
      s.stopped = true;
      break;
    }
  }
  return s;
}

}  // namespace proxmag
