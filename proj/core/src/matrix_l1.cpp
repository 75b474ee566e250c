#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "proxmag/douglas_rachford.hpp"
#include "proxmag/regularizers.hpp"

namespace proxmag {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t row_count(std::size_t n, std::size_t entries) {
  if (n == 0 || entries % n != 0 || entries == 0) {
    throw InvalidInput("matrix_weighted_l1: W must have m x n entries for an n-vector");
  }
  return entries / n;
}

}  // namespace

double matrix_weighted_l1_eval(std::span<const double> x, std::span<const double> w_row_major) {
  const std::size_t n = x.size();
  const std::size_t m = row_count(n, w_row_major.size());
  double s = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < n; ++c) acc += w_row_major[r * n + c] * x[c];
    s += std::abs(acc);
  }
  return s;
}

std::vector<double> matrix_weighted_l1_prox(std::span<const double> x,
                                            std::span<const double> w_row_major, double step,
                                            const MatrixL1Options& options) {
  const std::size_t n = x.size();
  const std::size_t m = row_count(n, w_row_major.size());
  if (!(step >= 0.0)) throw InvalidInput("matrix_weighted_l1_prox: step must be >= 0");
  if (step == 0.0) return {x.begin(), x.end()};

  const Eigen::Map<const RowMajor> W(w_row_major.data(), static_cast<Eigen::Index>(m),
                                     static_cast<Eigen::Index>(n));
  const Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                         static_cast<Eigen::Index>(n)) +
                               W.transpose() * W;
  const Eigen::LLT<Eigen::MatrixXd> llt(gram);

  // z = (x, s). A: projection onto s = W x. B: prox of 0.5||x - v||^2 + step ||s||_1.
  const RealProx project_graph = [&](std::span<const double> in, std::span<double> out) {
    const Eigen::Map<const Eigen::VectorXd> a(in.data(), static_cast<Eigen::Index>(n));
    const Eigen::Map<const Eigen::VectorXd> b(in.data() + n, static_cast<Eigen::Index>(m));
    const Eigen::VectorXd xp = llt.solve(a + W.transpose() * b);
    Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(n)) = xp;
    Eigen::Map<Eigen::VectorXd>(out.data() + n, static_cast<Eigen::Index>(m)) = W * xp;
  };
  const RealProx prox_separable = [&](std::span<const double> in, std::span<double> out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = 0.5 * (in[i] + x[i]);
    for (std::size_t i = 0; i < m; ++i) {
      const double a = std::abs(in[n + i]) - step;
      out[n + i] = a > 0.0 ? std::copysign(a, in[n + i]) : 0.0;
    }
  };
  double scale = 1.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  const double tol = options.tol * scale;
  const DrStop stop = [&](std::span<const double> z, std::span<const double> z_prev,
                          std::size_t k) {
    if (k == 0) return false;
    double change = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) change = std::max(change, std::abs(z[i] - z_prev[i]));
    return change < tol;
  };

  std::vector<double> y0(n + m);
  std::copy(x.begin(), x.end(), y0.begin());
  const DrState state = douglas_rachford_loop(project_graph, prox_separable, y0,
                                              options.max_iters, stop);
  if (!state.stopped) {
    throw ConvergenceError("matrix_weighted_l1_prox: Douglas-Rachford budget exhausted");
  }
  return {state.x.begin(), state.x.begin() + static_cast<std::ptrdiff_t>(n)};
}

MatrixWeightedL1::MatrixWeightedL1(Shape shape, std::vector<double> w_row_major, double lambda,
                                   MatrixL1Options options)
    : shape_(shape), w_(std::move(w_row_major)), lambda_(lambda), options_(options) {
  (void)row_count(shape_.size(), w_.size());
  if (!(lambda_ >= 0.0)) throw InvalidInput("MatrixWeightedL1: lambda must be >= 0");
}

double MatrixWeightedL1::eval(std::span<const double> x) const {
  return lambda_ * matrix_weighted_l1_eval(x, w_);
}

void MatrixWeightedL1::prox(std::span<const double> x, double step, std::span<double> out) const {
  const auto r = matrix_weighted_l1_prox(x, w_, step * lambda_, options_);
  std::copy(r.begin(), r.end(), out.begin());
}

}  // namespace proxmag
