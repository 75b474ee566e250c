#include "proxmag/exact_oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace proxmag::oracles {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t rows_of(std::size_t n, std::size_t entries) {
  if (n == 0 || entries % n != 0) throw std::invalid_argument("oracle: W must be m x n");
  return entries / n;
}

}  // namespace

double l1_matrix_objective(std::span<const double> x, std::span<const double> r,
                           std::span<const double> w, double t) {
  const std::size_t n = x.size();
  const std::size_t m = rows_of(n, w.size());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += 0.5 * (x[i] - r[i]) * (x[i] - r[i]);
  for (std::size_t k = 0; k < m; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[k * n + i] * x[i];
    s += t * std::abs(acc);
  }
  return s;
}

EnumerationResult l1_matrix_prox_enumerate(std::span<const double> r, std::span<const double> w,
                                           double t, bool nonneg) {
  const std::size_t n = r.size();
  const std::size_t m = rows_of(n, w.size());
  if (m > 8 || n > 8) throw std::invalid_argument("oracle: problem too large to enumerate");
  const Eigen::Map<const RowMajor> W(w.data(), static_cast<Eigen::Index>(m),
                                     static_cast<Eigen::Index>(n));
  const Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(n));

  std::size_t sign_patterns = 1;
  for (std::size_t k = 0; k < m; ++k) sign_patterns *= 3;
  const std::size_t active_sets = nonneg ? (std::size_t{1} << n) : 1;

  EnumerationResult best;
  best.objective = std::numeric_limits<double>::infinity();
  std::vector<double> cand(n);
  for (std::size_t sp = 0; sp < sign_patterns; ++sp) {
    // Digit 0: W_k x = 0, 1: positive, 2: negative.
    Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    std::vector<Eigen::Index> zero_rows;
    std::size_t code = sp;
    for (std::size_t k = 0; k < m; ++k, code /= 3) {
      const auto row = static_cast<Eigen::Index>(k);
      switch (code % 3) {
        case 0: zero_rows.push_back(row); break;
        case 1: g += W.row(row).transpose(); break;
        default: g -= W.row(row).transpose(); break;
      }
    }
    const Eigen::VectorXd v = rv - t * g;
    for (std::size_t as = 0; as < active_sets; ++as) {
      const auto fixed = static_cast<Eigen::Index>(std::popcount(as));
      const auto k = static_cast<Eigen::Index>(zero_rows.size()) + fixed;
      Eigen::VectorXd x = v;
      if (k > 0) {
        Eigen::MatrixXd c(k, static_cast<Eigen::Index>(n));
        Eigen::Index row = 0;
        for (Eigen::Index zr : zero_rows) c.row(row++) = W.row(zr);
        for (std::size_t i = 0; i < n; ++i) {
          if ((as >> i) & 1U) {
            c.row(row).setZero();
            c(row++, static_cast<Eigen::Index>(i)) = 1.0;
          }
        }
        // Orthogonal projection of v onto ker(c).
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(c);
        x = v - cod.solve(c * v);
      }
      ++best.candidates;
      bool feasible = true;
      for (std::size_t i = 0; i < n; ++i) {
        double xi = x[static_cast<Eigen::Index>(i)];
        if (nonneg) {
          if (xi < -1e-12) feasible = false;
          xi = std::max(xi, 0.0);
        }
        cand[i] = xi;
      }
      if (!feasible) continue;
      const double obj = l1_matrix_objective(cand, r, w, t);
      if (obj < best.objective) {
        best.objective = obj;
        best.x = cand;
      }
    }
  }
  return best;
}

double tgv1d_exact(std::span<const double> u, double a, double b) {
  if (u.size() < 2) return 0.0;
  const std::size_t m = u.size() - 1;
  std::vector<double> g(m);
  for (std::size_t j = 0; j < m; ++j) g[j] = u[j + 1] - u[j];
  std::vector<double> values = g;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  const std::size_t k = values.size();

  std::vector<double> cost(k), next(k);
  for (std::size_t v = 0; v < k; ++v) cost[v] = a * std::abs(g[0] - values[v]);
  for (std::size_t j = 1; j < m; ++j) {
    for (std::size_t v = 0; v < k; ++v) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t l = 0; l < k; ++l) {
        best = std::min(best, cost[l] + b * std::abs(values[v] - values[l]));
      }
      next[v] = a * std::abs(g[j] - values[v]) + best;
    }
    cost.swap(next);
  }
  return *std::min_element(cost.begin(), cost.end());
}

double tgv1d_prox_objective(std::span<const double> u, std::span<const double> r, double a,
                            double b) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += 0.5 * (u[i] - r[i]) * (u[i] - r[i]);
  return s + tgv1d_exact(u, a, b);
}

namespace {

// Dual value at q (|q| <= b), with p = G^T q rescaled so that |p| <= a.
double tgv1d_dual_value(std::span<const double> r, std::vector<double> q, double a, double b,
                        bool nonneg) {
  const std::size_t n = r.size();
  const std::size_t m = n - 1;
  for (double& v : q) v = std::clamp(v, -b, b);
  std::vector<double> p(m, 0.0);
  for (std::size_t j = 0; j + 1 < m; ++j) {
    // G w = w_{j+1} - w_j, so G^T q contributes -q_j at j and q_j at j + 1.
    p[j] -= q[j];
    p[j + 1] += q[j];
  }
  double pmax = 0.0;
  for (double v : p) pmax = std::max(pmax, std::abs(v));
  if (pmax > a) {
    for (double& v : p) v *= a / pmax;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // (D^T p)_i = p_{i-1} - p_i.
    const double c = (i > 0 ? p[i - 1] : 0.0) - (i < m ? p[i] : 0.0);
    const double ui = nonneg ? std::max(r[i] - c, 0.0) : r[i] - c;
    s += 0.5 * (ui - r[i]) * (ui - r[i]) + c * ui;
  }
  return s;
}

}  // namespace

Tgv1dCertificate tgv1d_bounded_prox(std::span<const double> r, double a, double b, bool nonneg,
                                    std::size_t iterations) {
  const std::size_t n = r.size();
  if (n < 3) throw std::invalid_argument("tgv1d oracle: need at least three samples");
  const std::size_t m = n - 1;
  const double step = 0.99 / std::sqrt(13.0);

  std::vector<double> u(r.begin(), r.end()), w(m), p(m, 0.0), q(m - 1, 0.0);
  for (std::size_t j = 0; j < m; ++j) w[j] = u[j + 1] - u[j];
  std::vector<double> ub = u, wb = w, u_old(n), w_old(m);

  Tgv1dCertificate out;
  out.lower_bound = -std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < iterations; ++it) {
    for (std::size_t j = 0; j < m; ++j) {
      p[j] = std::clamp(p[j] + step * (ub[j + 1] - ub[j] - wb[j]), -a, a);
    }
    for (std::size_t j = 0; j + 1 < m; ++j) {
      q[j] = std::clamp(q[j] + step * (wb[j + 1] - wb[j]), -b, b);
    }
    u_old = u;
    w_old = w;
    for (std::size_t i = 0; i < n; ++i) {
      const double dtp = (i > 0 ? p[i - 1] : 0.0) - (i < m ? p[i] : 0.0);
      const double v = (u[i] - step * dtp + step * r[i]) / (1.0 + step);
      u[i] = nonneg ? std::max(v, 0.0) : v;
    }
    for (std::size_t j = 0; j < m; ++j) {
      const double gtq = (j > 0 ? q[j - 1] : 0.0) - (j + 1 < m ? q[j] : 0.0);
      w[j] -= step * (-p[j] + gtq);
    }
    for (std::size_t i = 0; i < n; ++i) ub[i] = 2.0 * u[i] - u_old[i];
    for (std::size_t j = 0; j < m; ++j) wb[j] = 2.0 * w[j] - w_old[j];
    if ((it + 1) % 1000 == 0) {
      out.lower_bound = std::max(out.lower_bound, tgv1d_dual_value(r, q, a, b, nonneg));
    }
  }
  out.lower_bound = std::max(out.lower_bound, tgv1d_dual_value(r, q, a, b, nonneg));
  out.u = u;
  out.objective = tgv1d_prox_objective(u, r, a, b);
  return out;
}

}  // namespace proxmag::oracles
