#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace proxmag::oracles {

/// Exact minimiser of 0.5 ||x - r||^2 + t ||W x||_1 (optionally over x >= 0)
/// by enumerating sign patterns of W x and active sets of x. W is m x n row
/// major. Cost is 3^m 2^n small solves, so keep m, n <= 5.
struct EnumerationResult {
  std::vector<double> x;
  double objective = 0.0;
  std::size_t candidates = 0;
};
[[nodiscard]] EnumerationResult l1_matrix_prox_enumerate(std::span<const double> r,
                                                         std::span<const double> w, double t,
                                                         bool nonneg);

[[nodiscard]] double l1_matrix_objective(std::span<const double> x, std::span<const double> r,
                                         std::span<const double> w, double t);

/// 1-D second-order TGV, a sum |Du - w| + b sum |D w| minimised over w, where
/// D is the forward difference. With g = Du this is an L1-TV problem in w and
/// a minimiser exists with values among the g_j, so a dynamic program over
/// those values is exact. Cost O(n^3).
[[nodiscard]] double tgv1d_exact(std::span<const double> u, double a, double b);

/// 0.5 ||u - r||^2 + tgv1d_exact(u, a, b).
[[nodiscard]] double tgv1d_prox_objective(std::span<const double> u, std::span<const double> r,
                                          double a, double b);

/// Bounded 1-D TGV prox: min_{u >= 0} 0.5 ||u - r||^2 + TGV(u), solved by a
/// long plain primal-dual run on (u, w). lower_bound is the dual value at a
/// feasible point built from the dual iterate, so the true minimum lies in
/// [lower_bound, objective].
struct Tgv1dCertificate {
  std::vector<double> u;
  double objective = 0.0;
  double lower_bound = 0.0;
};
[[nodiscard]] Tgv1dCertificate tgv1d_bounded_prox(std::span<const double> r, double a, double b,
                                                  bool nonneg = true,
                                                  std::size_t iterations = 200000);

}  // namespace proxmag::oracles
