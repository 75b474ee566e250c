#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "proxmag/core.hpp"

namespace proxmag {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A regulariser H on real vectors: extended-real evaluation plus its proximal
/// map prox_{step H}. Implementations are immutable and reentrant.
class ProxFunction {
 public:
  virtual ~ProxFunction() = default;

  [[nodiscard]] virtual Shape shape() const = 0;
  [[nodiscard]] std::size_t size() const { return shape().size(); }

  /// H(x); +infinity outside the effective domain.
  [[nodiscard]] virtual double eval(std::span<const double> x) const = 0;

  /// out = argmin_y step * H(y) + 0.5 ||y - x||^2. out may not alias x.
  virtual void prox(std::span<const double> x, double step, std::span<double> out) const = 0;

  /// False for regularisers such as multi-bang; the prox is then a
  /// stationary-point map rather than a global minimiser.
  [[nodiscard]] virtual bool convex() const { return true; }

  [[nodiscard]] virtual std::string name() const = 0;

  [[nodiscard]] std::vector<double> prox(std::span<const double> x, double step) const;
};

/// H = 0 on a given shape.
class ZeroFunction final : public ProxFunction {
 public:
  explicit ZeroFunction(Shape shape) : shape_(shape) {}
  [[nodiscard]] Shape shape() const override { return shape_; }
  [[nodiscard]] double eval(std::span<const double>) const override { return 0.0; }
  void prox(std::span<const double> x, double step, std::span<double> out) const override;
  using ProxFunction::prox;
  [[nodiscard]] std::string name() const override { return "zero"; }

 private:
  Shape shape_;
};

struct MagLiftOptions {
  std::size_t max_dr_iters = 500;
  double dr_tol = 1e-9;
};

struct MagLiftReport {
  std::size_t dr_iterations = 0;
  bool entered_fallback = false;
  /// Smallest component of the last prox_H iterate, before clamping.
  double final_min_component = 0.0;
};

/// Thrown when the Douglas-Rachford fallback exhausts its budget.
class MagLiftConvergenceError : public ConvergenceError {
 public:
  MagLiftConvergenceError(const std::string& what, MagLiftReport report)
      : ConvergenceError(what), report_(report) {}
  [[nodiscard]] const MagLiftReport& report() const { return report_; }

 private:
  MagLiftReport report_;
};

struct MagLiftResult {
  ComplexImage image;
  /// magnitude = bounded prox of |z|; phase = phase of z, copied unchanged.
  MagPhase lifted;
  MagLiftReport report;
};

/// prox of step * H(|.|) at z.
///
/// Starts from y = |z| and x = prox_H(y). If x already lies in the
/// nonnegative orthant this is the answer and no Douglas-Rachford iteration
/// is run. Otherwise the iteration
///     y <- y + proj_{>=0}(x - y/2 + |z|/2) - x,   x <- prox_H(y)
/// continues until no component is below -dr_tol or the iterate stalls
/// (||x_{k+1} - x_k||_inf < dr_tol). The result is max(x, 0) o Phi.
[[nodiscard]] MagLiftResult magnitude_lift(const ProxFunction& h, const ComplexImage& z,
                                           double step, const MagLiftOptions& options = {});

/// Span form used inside solvers: writes the lifted point to out.
MagLiftReport magnitude_lift(const ProxFunction& h, std::span<const cplx> z, double step,
                             const MagLiftOptions& options, std::span<cplx> out);

/// argmin_{x >= 0} step * H(x) + 0.5 ||x - r||^2, through the same loop as
/// magnitude_lift.
[[nodiscard]] std::vector<double> bounded_prox(const ProxFunction& h, std::span<const double> r,
                                               double step, const MagLiftOptions& options = {},
                                               MagLiftReport* report = nullptr);

[[nodiscard]] std::vector<double> project_nonneg(std::span<const double> x);

/// proj_{>=0}((r + y) / 2): prox of chi_{>=0} + 0.5 ||. - r||^2 at y.
[[nodiscard]] std::vector<double> prox_F_shifted(std::span<const double> y,
                                                 std::span<const double> r);

struct OracleOptions {
  std::size_t restarts = 8;
  std::size_t iters = 2000;
  std::uint64_t seed = 1;
  double initial_step = 0.5;
  double min_step = 1e-12;
  /// Optional extra starting point, e.g. a known feasible point.
  std::vector<cplx> start;
};

/// Objective step * H(|y|) + 0.5 ||y - z||^2 over complex y (equivalently
/// H(|y|) + ||y - z||^2 / (2 step), scaled by step).
[[nodiscard]] double complex_prox_objective(const ProxFunction& h, std::span<const cplx> y,
                                            std::span<const cplx> z, double step);

/// Derivative-free multi-start pattern search over y in C^n treated as 2n
/// reals. Meant for n <= 16 as a test oracle.
[[nodiscard]] ComplexImage brute_force_prox_oracle(const ProxFunction& h, const ComplexImage& z,
                                                   double step, const OracleOptions& options = {});

}  // namespace proxmag
