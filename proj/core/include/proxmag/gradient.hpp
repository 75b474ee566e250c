#pragma once

#include <span>
#include <vector>

#include "proxmag/linear_operator.hpp"

namespace proxmag {

/// Difference direction on a K x H x W grid. Channel doubles as depth or time.
enum class Axis { channel, row, col };

struct ScaledAxis {
  Axis axis;
  double weight = 1.0;
};

/// Forward differences with replicate (Neumann) boundary: the difference at the
/// last index along an axis is zero. Output holds one K x H x W block per axis,
/// in the order given. Constants lie in the kernel.
class GradientOperator final : public LinearOperator {
 public:
  GradientOperator(Shape shape, std::vector<ScaledAxis> axes);

  [[nodiscard]] Shape domain() const override { return shape_; }
  [[nodiscard]] Shape range() const override {
    return {axes_.size() * shape_.channels, shape_.height, shape_.width};
  }
  [[nodiscard]] const std::vector<ScaledAxis>& axes() const { return axes_; }
  [[nodiscard]] std::size_t axis_count() const { return axes_.size(); }

  void apply(std::span<const cplx> x, std::span<cplx> y) const override;
  void adjoint(std::span<const cplx> y, std::span<cplx> x) const override;
  using LinearOperator::adjoint;
  using LinearOperator::apply;

  void apply(std::span<const double> x, std::span<double> y) const;
  void adjoint(std::span<const double> y, std::span<double> x) const;

  /// Upper bound on ||D||^2: sum of 4 w^2 over axes of length > 1.
  [[nodiscard]] double norm_squared_bound() const;

 protected:
  [[nodiscard]] double compute_norm_estimate() const override;

 private:
  Shape shape_;
  std::vector<ScaledAxis> axes_;
};

/// Symmetrised gradient of a 2-D vector field w = (w_row, w_col) per channel,
/// laid out as two K x H x W blocks (the range of a {row, col} GradientOperator).
/// Each component is differenced only over its own support (w_row for i < H-1,
/// w_col for j < W-1) with Neumann boundary at the last valid index, so that
/// the gradient of an affine image is in the kernel. Output is four blocks
/// (e_rr, e_rc, e_cr, e_cc) with e_rc = e_cr, so the pointwise Euclidean norm is
/// the Frobenius norm of the symmetric tensor.
class SymGradientOperator final : public LinearOperator {
 public:
  explicit SymGradientOperator(Shape image_shape);

  [[nodiscard]] Shape domain() const override {
    return {2 * shape_.channels, shape_.height, shape_.width};
  }
  [[nodiscard]] Shape range() const override {
    return {4 * shape_.channels, shape_.height, shape_.width};
  }

  void apply(std::span<const cplx> x, std::span<cplx> y) const override;
  void adjoint(std::span<const cplx> y, std::span<cplx> x) const override;
  using LinearOperator::adjoint;
  using LinearOperator::apply;

  void apply(std::span<const double> x, std::span<double> y) const;
  void adjoint(std::span<const double> y, std::span<double> x) const;

 private:
  Shape shape_;
};

}  // namespace proxmag
