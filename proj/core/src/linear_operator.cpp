#include "proxmag/linear_operator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace proxmag {

std::vector<cplx> LinearOperator::apply(std::span<const cplx> x) const {
  std::vector<cplx> y(range().size());
  apply(x, y);
  return y;
}

std::vector<cplx> LinearOperator::adjoint(std::span<const cplx> y) const {
  std::vector<cplx> x(domain().size());
  adjoint(y, x);
  return x;
}

double LinearOperator::norm_estimate() const {
  std::call_once(norm_once_, [this] { norm_ = compute_norm_estimate(); });
  return norm_;
}

double LinearOperator::compute_norm_estimate() const {
  return operator_norm_estimate(*this, 100, 0x5eedULL);
}

std::vector<cplx> random_complex(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& z : v) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = {re, im};
  }
  return v;
}

double operator_norm_estimate(const LinearOperator& op, std::size_t iters, std::uint64_t seed) {
  if (iters == 0) throw InvalidInput("operator_norm_estimate: iters must be >= 1");
  std::vector<cplx> x = random_complex(op.domain().size(), seed);
  std::vector<cplx> y(op.range().size());
  std::vector<cplx> z(op.domain().size());
  double nx = norm2(x);
  if (nx == 0.0) return 0.0;
  for (auto& v : x) v /= nx;
  double lambda = 0.0;
  for (std::size_t k = 0; k < iters; ++k) {
    op.apply(x, y);
    op.adjoint(y, z);
    lambda = norm2(z);
    if (lambda == 0.0) return 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = z[i] / lambda;
  }
  return std::sqrt(lambda);
}

AdjointCheckResult adjoint_check(const LinearOperator& op, std::size_t trials, double tol,
                                 std::uint64_t seed) {
  constexpr double eps = 1e-300;
  AdjointCheckResult result{true, 0.0};
  std::vector<cplx> ax(op.range().size());
  std::vector<cplx> ahy(op.domain().size());
  for (std::size_t t = 0; t < trials; ++t) {
    const auto x = random_complex(op.domain().size(), seed + 2 * t);
    const auto y = random_complex(op.range().size(), seed + 2 * t + 1);
    op.apply(x, ax);
    op.adjoint(y, ahy);
    const cplx lhs = dot(ax, y);
    const cplx rhs = dot(x, ahy);
    const double err = std::abs(lhs - rhs) / (norm2(ax) * norm2(y) + eps);
    result.worst_relative_error = std::max(result.worst_relative_error, err);
  }
  result.pass = result.worst_relative_error <= tol;
  return result;
}

void IdentityOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  std::copy(x.begin(), x.end(), y.begin());
}

void IdentityOperator::adjoint(std::span<const cplx> y, std::span<cplx> x) const {
  std::copy(y.begin(), y.end(), x.begin());
}

DenseOperator::DenseOperator(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
  if (a_.size() != rows * cols) throw InvalidInput("DenseOperator: entry count mismatch");
}

void DenseOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  for (std::size_t r = 0; r < rows_; ++r) {
    cplx s{};
    for (std::size_t c = 0; c < cols_; ++c) s += a_[r * cols_ + c] * x[c];
    y[r] = s;
  }
}

void DenseOperator::adjoint(std::span<const cplx> y, std::span<cplx> x) const {
  std::fill(x.begin(), x.end(), cplx{});
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) x[c] += std::conj(a_[r * cols_ + c]) * y[r];
  }
}

}  // namespace proxmag
