#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "proxmag/core.hpp"

namespace proxmag {

/// Linear map between flattened complex grids together with its exact
/// conjugate transpose. Implementations must be reentrant: apply/adjoint may be
/// called concurrently.
class LinearOperator {
 public:
  LinearOperator() = default;
  LinearOperator(const LinearOperator&) = delete;
  LinearOperator& operator=(const LinearOperator&) = delete;
  virtual ~LinearOperator() = default;

  [[nodiscard]] virtual Shape domain() const = 0;
  [[nodiscard]] virtual Shape range() const = 0;

  /// y = A x. x.size() == domain().size(), y.size() == range().size().
  virtual void apply(std::span<const cplx> x, std::span<cplx> y) const = 0;
  /// x = A^H y.
  virtual void adjoint(std::span<const cplx> y, std::span<cplx> x) const = 0;

  [[nodiscard]] std::vector<cplx> apply(std::span<const cplx> x) const;
  [[nodiscard]] std::vector<cplx> adjoint(std::span<const cplx> y) const;

  /// Spectral norm estimate, computed once on first use.
  [[nodiscard]] double norm_estimate() const;

 protected:
  /// Operators that know their norm cheaply (or exactly) may override.
  [[nodiscard]] virtual double compute_norm_estimate() const;

 private:
  mutable std::once_flag norm_once_;
  mutable double norm_ = 0.0;
};

/// Power iteration on A^H A. Deterministic for a given seed; 0 for the zero operator.
[[nodiscard]] double operator_norm_estimate(const LinearOperator& op, std::size_t iters,
                                            std::uint64_t seed);

struct AdjointCheckResult {
  bool pass = false;
  double worst_relative_error = 0.0;
};

/// Dot-product test |<Ax, y> - <x, A^H y>| / (|Ax| |y| + eps) <= tol on random x, y.
[[nodiscard]] AdjointCheckResult adjoint_check(const LinearOperator& op, std::size_t trials,
                                               double tol, std::uint64_t seed);

/// Random complex vector with i.i.d. standard normal real and imaginary parts.
[[nodiscard]] std::vector<cplx> random_complex(std::size_t n, std::uint64_t seed);

class IdentityOperator final : public LinearOperator {
 public:
  explicit IdentityOperator(Shape shape) : shape_(shape) {}
  [[nodiscard]] Shape domain() const override { return shape_; }
  [[nodiscard]] Shape range() const override { return shape_; }
  void apply(std::span<const cplx> x, std::span<cplx> y) const override;
  void adjoint(std::span<const cplx> y, std::span<cplx> x) const override;
  using LinearOperator::adjoint;
  using LinearOperator::apply;

 private:
  Shape shape_;
};

/// Dense row-major complex matrix acting on a flat vector.
class DenseOperator final : public LinearOperator {
 public:
  DenseOperator(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  [[nodiscard]] Shape domain() const override { return {1, 1, cols_}; }
  [[nodiscard]] Shape range() const override { return {1, 1, rows_}; }
  void apply(std::span<const cplx> x, std::span<cplx> y) const override;
  void adjoint(std::span<const cplx> y, std::span<cplx> x) const override;
  using LinearOperator::adjoint;
  using LinearOperator::apply;

  [[nodiscard]] cplx entry(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<cplx> a_;
};

/// Wraps an operator with independently supplied forward and adjoint callables.
/// Used to build deliberately mismatched pairs in tests.
class FunctionOperator final : public LinearOperator {
 public:
  using Map = std::function<void(std::span<const cplx>, std::span<cplx>)>;
  FunctionOperator(Shape domain, Shape range, Map forward, Map adjoint)
      : domain_(domain), range_(range), fwd_(std::move(forward)), adj_(std::move(adjoint)) {}
  [[nodiscard]] Shape domain() const override { return domain_; }
  [[nodiscard]] Shape range() const override { return range_; }
  void apply(std::span<const cplx> x, std::span<cplx> y) const override { fwd_(x, y); }
  void adjoint(std::span<const cplx> y, std::span<cplx> x) const override { adj_(y, x); }
  using LinearOperator::adjoint;
  using LinearOperator::apply;

 private:
  Shape domain_;
  Shape range_;
  Map fwd_;
  Map adj_;
};

}  // namespace proxmag
