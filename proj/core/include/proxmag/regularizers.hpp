#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "proxmag/gradient.hpp"
#include "proxmag/prox.hpp"

namespace proxmag {

// ---------------------------------------------------------------------------
// Weighted p-norms, p in {1, 2}

/// ||diag(w) x||_p. Empty w means unit weights.
[[nodiscard]] double weighted_lp_eval(std::span<const double> x, std::span<const double> w, int p);

/// prox of step * ||diag(w) .||_p. p = 1 soft-thresholds coordinate i at
/// step * w_i; p = 2 is block shrinkage (solved by bisection on the secular
/// equation when weights are not uniform).
[[nodiscard]] std::vector<double> weighted_lp_prox(std::span<const double> x,
                                                   std::span<const double> w, int p, double step);

/// lambda * ||diag(w) x||_p
class WeightedLpNorm final : public ProxFunction {
 public:
  WeightedLpNorm(Shape shape, int p, double lambda, std::vector<double> weights = {});
  [[nodiscard]] Shape shape() const override { return shape_; }
  [[nodiscard]] double eval(std::span<const double> x) const override;
  void prox(std::span<const double> x, double step, std::span<double> out) const override;
  using ProxFunction::prox;
  [[nodiscard]] std::string name() const override { return p_ == 1 ? "l1" : "l2"; }

 private:
  Shape shape_;
  int p_;
  double lambda_;
  std::vector<double> weights_;
};

/// lambda * ||x||_2^2
class SquaredL2 final : public ProxFunction {
 public:
  SquaredL2(Shape shape, double lambda);
  [[nodiscard]] Shape shape() const override { return shape_; }
  [[nodiscard]] double eval(std::span<const double> x) const override;
  void prox(std::span<const double> x, double step, std::span<double> out) const override;
  using ProxFunction::prox;
  [[nodiscard]] std::string name() const override { return "l2sq"; }

 private:
  Shape shape_;
  double lambda_;
};

// ---------------------------------------------------------------------------
// ||W x||_1 with a dense square W

struct MatrixL1Options {
  std::size_t max_iters = 200000;
  double tol = 1e-13;
};

[[nodiscard]] double matrix_weighted_l1_eval(std::span<const double> x,
                                             std::span<const double> w_row_major);

/// prox of step * ||W .||_1, by Douglas-Rachford on the graph {(x, s) : s = W x}
/// splitting the quadratic from the l1 term.
[[nodiscard]] std::vector<double> matrix_weighted_l1_prox(std::span<const double> x,
                                                          std::span<const double> w_row_major,
                                                          double step,
                                                          const MatrixL1Options& options = {});

/// lambda * ||W x||_1
class MatrixWeightedL1 final : public ProxFunction {
 public:
  MatrixWeightedL1(Shape shape, std::vector<double> w_row_major, double lambda = 1.0,
                   MatrixL1Options options = {});
  [[nodiscard]] Shape shape() const override { return shape_; }
  [[nodiscard]] double eval(std::span<const double> x) const override;
  void prox(std::span<const double> x, double step, std::span<double> out) const override;
  using ProxFunction::prox;
  [[nodiscard]] std::string name() const override { return "wl1-matrix"; }

 private:
  Shape shape_;
  std::vector<double> w_;
  double lambda_;
  MatrixL1Options options_;
};

// ---------------------------------------------------------------------------
// Total variation family

enum class TvVariant { iso2d, aniso2d, iso3d, aniso3d, vectorial, spatio_temporal };

[[nodiscard]] TvVariant parse_tv_variant(const std::string& name);
[[nodiscard]] std::string to_string(TvVariant v);

/// Gradient used by a TV variant. 2-D variants difference rows and columns of
/// each channel; 3-D and spatio-temporal variants also difference across
/// channels, scaled by channel_weight.
[[nodiscard]] GradientOperator tv_gradient(Shape shape, TvVariant variant,
                                           double channel_weight = 1.0);

[[nodiscard]] double tv_eval(std::span<const double> u, Shape shape, TvVariant variant,
                             double channel_weight = 1.0);

struct TvOptions {
  std::size_t inner_iters = 50;
  /// Early exit once the duality gap drops below this (0 = fixed budget).
  double gap_tol = 0.0;
  double channel_weight = 1.0;
};

struct TvProxInfo {
  std::size_t iterations = 0;
  double duality_gap = 0.0;
  /// Dual objective per inner iteration; non-increasing.
  std::vector<double> dual_objective;
};

/// argmin_x weight * TV(x) + 0.5 ||x - u||^2 by monotone fast gradient
/// projection on the dual.
[[nodiscard]] std::vector<double> tv_prox(std::span<const double> u, Shape shape, double weight,
                                          TvVariant variant, const TvOptions& options = {},
                                          TvProxInfo* info = nullptr);

/// lambda * TV(x)
class TotalVariation final : public ProxFunction {
 public:
  TotalVariation(Shape shape, TvVariant variant, double lambda, TvOptions options = {});
  [[nodiscard]] Shape shape() const override { return shape_; }
  [[nodiscard]] double eval(std::span<const double> x) const override;
  void prox(std::span<const double> x, double step, std::span<double> out) const override;
  using ProxFunction::prox;
  [[nodiscard]] std::string name() const override { return "tv-" + to_string(variant_); }

 private:
  Shape shape_;
  TvVariant variant_;
  double lambda_;
  TvOptions options_;
};

// ---------------------------------------------------------------------------
// Generalised Tikhonov: (lambda / 2) ||D x||_2^2

struct CgOptions {
  std::size_t max_iters = 200;
  double tol = 1e-10;
};

/// Solves (I + weight D^T D) x = r by conjugate gradients. Throws
/// ConvergenceError if the relative residual stays above tol.
[[nodiscard]] std::vector<double> gen_tikhonov_prox(std::span<const double> r, double weight,
                                                    const GradientOperator& d,
                                                    const CgOptions& options = {});

class GenTikhonov final : public ProxFunction {
 public:
  GenTikhonov(Shape shape, std::vector<ScaledAxis> axes, double lambda, CgOptions options = {});
  [[nodiscard]] Shape shape() const override { return d_.domain(); }
  [[nodiscard]] double eval(std::span<const double> x) const override;
  void prox(std::span<const double> x, double step, std::span<double> out) const override;
  using ProxFunction::prox;
  [[nodiscard]] std::string name() const override { return "gtik"; }

 private:
  GradientOperator d_;
  double lambda_;
  CgOptions options_;
};

// ---------------------------------------------------------------------------
// Multi-bang

/// Strictly increasing admissible values a_0 < ... < a_k.
class MultiBangLevels {
 public:
  explicit MultiBangLevels(std::vector<double> levels);
  [[nodiscard]] const std::vector<double>& values() const { return levels_; }

 private:
  std::vector<double> levels_;
};

/// sum_i m(x_i), m(x) = (a_{i+1} - x)(x - a_i) on [a_i, a_{i+1}], +inf outside [a_0, a_k].
[[nodiscard]] double multibang_eval(std::span<const double> x, const MultiBangLevels& levels);

/// Stationary-point prox of tau * M for 0 < tau < 1/2: snap to a_i on
/// [a_i - tau (a_i - a_{i-1}), a_i + tau (a_{i+1} - a_i)], and in the gaps
/// x -> (x - tau (a_i + a_{i+1})) / (1 - 2 tau).
[[nodiscard]] double multibang_prox_scalar(double x, const MultiBangLevels& levels, double tau);
[[nodiscard]] std::vector<double> multibang_prox(std::span<const double> x,
                                                 const MultiBangLevels& levels, double tau);

/// lambda * M(x). Non-convex; step * lambda must stay below 1/2.
class MultiBang final : public ProxFunction {
 public:
  MultiBang(Shape shape, MultiBangLevels levels, double lambda);
  [[nodiscard]] Shape shape() const override { return shape_; }
  [[nodiscard]] double eval(std::span<const double> x) const override;
  void prox(std::span<const double> x, double step, std::span<double> out) const override;
  using ProxFunction::prox;
  [[nodiscard]] bool convex() const override { return false; }
  [[nodiscard]] std::string name() const override { return "multibang"; }

 private:
  Shape shape_;
  MultiBangLevels levels_;
  double lambda_;
};

// ---------------------------------------------------------------------------
// Indicators

[[nodiscard]] std::vector<double> indicator_box_prox(std::span<const double> x,
                                                     std::span<const double> lo,
                                                     std::span<const double> hi);
/// Points within kIndicatorSlack * max(1, |lo|, |hi|) of the box count as
/// inside, so magnitudes recomputed from lifted complex values evaluate to 0.
inline constexpr double kIndicatorSlack = 1e-12;

[[nodiscard]] double indicator_set_eval(std::span<const double> x, std::span<const double> lo,
                                        std::span<const double> hi);

/// chi_{[lo, hi]} elementwise.
class BoxIndicator final : public ProxFunction {
 public:
  BoxIndicator(Shape shape, double lo, double hi);
  BoxIndicator(Shape shape, std::vector<double> lo, std::vector<double> hi);
  [[nodiscard]] Shape shape() const override { return shape_; }
  [[nodiscard]] double eval(std::span<const double> x) const override;
  void prox(std::span<const double> x, double step, std::span<double> out) const override;
  using ProxFunction::prox;
  [[nodiscard]] std::string name() const override { return "box"; }

 private:
  Shape shape_;
  std::vector<double> lo_;
  std::vector<double> hi_;
};

// ---------------------------------------------------------------------------
// Second-order total generalised variation

struct TgvOptions {
  std::size_t inner_iters = 100;
  /// Early exit when the relative iterate change falls below this (0 = fixed budget).
  double tol = 0.0;
};

struct TgvSolution {
  std::vector<double> u;
  std::vector<double> w;  // vector field, two blocks (row, col)
  double primal_objective = 0.0;
  /// Dual residual ||p - E^T q||; zero at a saddle point.
  double dual_infeasibility = 0.0;
  /// Primal objective minus the Lagrangian lower bound at (p, q), with the
  /// w-coupling treated as a penalty: a primal-dual gap proxy.
  double gap = 0.0;
  std::size_t iterations = 0;
};

/// alpha ||D u - w||_{2,1} + beta ||E w||_{2,1} for a given w.
[[nodiscard]] double tgv2_objective(std::span<const double> u, std::span<const double> w,
                                    Shape shape, double alpha, double beta);

/// Minimises 0.5 ||u - y||^2 + alpha ||D u - w||_{2,1} + beta ||E w||_{2,1}
/// jointly over (u, w) by primal-dual hybrid gradient. alpha and beta already
/// include any step scaling.
[[nodiscard]] TgvSolution tgv2_prox_solve(std::span<const double> y, Shape shape, double alpha,
                                          double beta, const TgvOptions& options = {});

/// TGV2(u) = min_w alpha ||D u - w|| + beta ||E w||, by primal-dual iterations on w.
[[nodiscard]] double tgv2_eval(std::span<const double> u, Shape shape, double alpha, double beta,
                               const TgvOptions& options = {});

[[nodiscard]] std::vector<double> tgv2_prox(std::span<const double> u, Shape shape, double alpha,
                                            double beta, double step,
                                            const TgvOptions& options = {});

/// lambda * TGV2_{alpha, beta}
class Tgv2 final : public ProxFunction {
 public:
  Tgv2(Shape shape, double alpha, double beta, double lambda = 1.0, TgvOptions options = {});
  [[nodiscard]] Shape shape() const override { return shape_; }
  [[nodiscard]] double eval(std::span<const double> x) const override;
  void prox(std::span<const double> x, double step, std::span<double> out) const override;
  using ProxFunction::prox;
  [[nodiscard]] std::string name() const override { return "tgv2"; }

 private:
  Shape shape_;
  double alpha_;
  double beta_;
  double lambda_;
  TgvOptions options_;
};

}  // namespace proxmag
