#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace proxmag {

/// Proximal map on real vectors: out = prox(in). Unit step; callers bind their own.
using RealProx = std::function<void(std::span<const double> in, std::span<double> out)>;

/// Decides whether to stop after computing x_k (iteration k >= 0). x_prev is
/// empty at k = 0.
using DrStop = std::function<bool(std::span<const double> x, std::span<const double> x_prev,
                                  std::size_t k)>;

struct DrState {
  std::vector<double> x;
  std::vector<double> y;
  std::size_t iterations = 0;
  bool stopped = false;  // false when the budget ran out first
  std::vector<double> step_change;  // ||x_{k+1} - x_k||_inf per iteration
};

/// Douglas-Rachford splitting for min A(x) + B(x):
///   x_{k+1} = proxA(y_k)
///   y_{k+1} = y_k + proxB(2 x_{k+1} - y_k) - x_{k+1}
/// The first x is proxA(y0); the stop predicate is consulted after every x update.
[[nodiscard]] DrState douglas_rachford_loop(const RealProx& prox_a, const RealProx& prox_b,
                                            std::span<const double> y0, std::size_t max_iters,
                                            const DrStop& stop);

}  // namespace proxmag
