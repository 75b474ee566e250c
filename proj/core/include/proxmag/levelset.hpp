#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "proxmag/core.hpp"
#include "proxmag/grid.hpp"

namespace proxmag {

/// Parametric level-set image
///   f = C_H T_w(phi - c) + C_L (1 - T_w(phi - c)),
///   phi(r) = sum_j sigma(alpha_j) psi(|R_j (r - chi_j)|),
/// with psi the Wendland C2 function (1 - rho)^4_+ (4 rho + 1), logistic
/// sigma and T_w(t) = 1 / (1 + exp(-t / w)), and
/// R_j = diag(exp(beta_j1), exp(beta_j2)) rot(gamma_j).
struct LevelSetParams {
  std::vector<double> alpha;
  std::vector<std::array<double, 2>> centers;  // meters
  std::vector<std::array<double, 2>> beta;
  std::vector<double> gamma;
  double c_high = 1.0;
  double c_low = 0.0;
  double level = 0.05;
  double width = 0.0025;

  [[nodiscard]] std::size_t basis_count() const { return alpha.size(); }
  /// Optimised parameters (alpha, beta, gamma): 4 per basis function.
  [[nodiscard]] std::size_t free_count() const { return 4 * alpha.size(); }
  /// Throws InvalidInput unless N >= 1, sizes agree, C_H > C_L >= 0 and w > 0.
  void validate() const;

  /// Packs / unpacks [alpha, beta_1, beta_2, gamma] (each of length N).
  [[nodiscard]] std::vector<double> pack() const;
  void unpack(std::span<const double> p);
};

void to_json(nlohmann::json& j, const LevelSetParams& p);
void from_json(const nlohmann::json& j, LevelSetParams& p);

[[nodiscard]] double wendland_c2(double rho);
[[nodiscard]] double logistic(double t);

/// Rendered image in [C_L, C_H], row-major over the grid.
[[nodiscard]] std::vector<double> palentir_render(const LevelSetParams& p, const SceneGrid& grid);

/// Jacobian of the rendered image with respect to pack(), row-major
/// (pixels x free_count).
[[nodiscard]] std::vector<double> palentir_jacobian(const LevelSetParams& p,
                                                    const SceneGrid& grid);

struct LevelSetOptions {
  std::size_t gn_iters = 50;
  std::size_t max_backtracks = 30;
  /// Stop once 0.5 ||f - r||^2 falls below this.
  double objective_tol = 1e-24;
  /// Stop when an accepted step lowers the objective by less than this fraction.
  double relative_decrease_tol = 1e-12;
};

struct LevelSetProjection {
  LevelSetParams params;
  std::vector<double> image;
  /// 0.5 ||f(p) - r||^2 at p0 and after every accepted step.
  std::vector<double> objective;
  std::size_t iterations = 0;
  /// Line search failed to decrease the objective.
  bool stalled = false;
};

/// Local projection of r onto the rendered family: Gauss-Newton on
/// 0.5 ||f(p) - r||^2 with backtracking, contrasts, level, width and centers
/// held fixed. Returns the best iterate.
[[nodiscard]] LevelSetProjection levelset_project(std::span<const double> r,
                                                  const SceneGrid& grid,
                                                  const LevelSetParams& p0,
                                                  const LevelSetOptions& options = {});

struct LevelSetProx {
  ComplexImage image;
  LevelSetProjection projection;
};

/// Projects |z| with levelset_project and reattaches the phase of z.
[[nodiscard]] LevelSetProx levelset_prox_complex(const ComplexImage& z, const SceneGrid& grid,
                                                 const LevelSetParams& p0,
                                                 const LevelSetOptions& options = {});

}  // namespace proxmag
