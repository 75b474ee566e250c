#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "proxmag/regularizers.hpp"

namespace proxmag {
namespace {

GradientOperator tgv_gradient(Shape shape) {
  return GradientOperator(shape, {{Axis::row, 1.0}, {Axis::col, 1.0}});
}

double group_norm_sum(std::span<const double> g, std::size_t n, std::size_t blocks) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) acc += g[b * n + i] * g[b * n + i];
    s += std::sqrt(acc);
  }
  return s;
}

void project_groups(std::span<double> g, std::size_t n, std::size_t blocks, double radius) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) acc += g[b * n + i] * g[b * n + i];
    const double nrm = std::sqrt(acc);
    if (nrm > radius) {
      const double s = radius / nrm;
      for (std::size_t b = 0; b < blocks; ++b) g[b * n + i] *= s;
    }
  }
}

// ||E||^2 per image shape, by power iteration (padded by 1%).
double symgrad_norm_squared(Shape shape) {
  static std::mutex mutex;
  static std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> cache;
  const auto key = std::make_tuple(shape.channels, shape.height, shape.width);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const SymGradientOperator e(shape);
  const double nrm = operator_norm_estimate(e, 200, 0x7e5);
  const double value = 1.01 * nrm * nrm;
  std::lock_guard lock(mutex);
  cache.emplace(key, value);
  return value;
}

double gradient_norm_squared(Shape shape) {
  static std::mutex mutex;
  static std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> cache;
  const auto key = std::make_tuple(shape.channels, shape.height, shape.width);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const GradientOperator d = tgv_gradient(shape);
  const double nrm = operator_norm_estimate(d, 200, 0x7e5);
  const double value = 1.01 * nrm * nrm;
  std::lock_guard lock(mutex);
  cache.emplace(key, value);
  return value;
}

void check_params(std::span<const double> u, Shape shape, double alpha, double beta) {
  if (u.size() != shape.size()) throw InvalidInput("tgv2: size does not match shape");
  if (!(alpha > 0.0) || !(beta > 0.0)) throw InvalidInput("tgv2: alpha and beta must be > 0");
}

}  // namespace

double tgv2_objective(std::span<const double> u, std::span<const double> w, Shape shape,
                      double alpha, double beta) {
  const std::size_t n = shape.size();
  if (u.size() != n || w.size() != 2 * n) throw InvalidInput("tgv2_objective: size mismatch");
  const GradientOperator d = tgv_gradient(shape);
  const SymGradientOperator e(shape);
  std::vector<double> du(2 * n), ew(4 * n);
  d.apply(u, std::span<double>(du));
  for (std::size_t i = 0; i < 2 * n; ++i) du[i] -= w[i];
  e.apply(w, std::span<double>(ew));
  return alpha * group_norm_sum(du, n, 2) + beta * group_norm_sum(ew, n, 4);
}

TgvSolution tgv2_prox_solve(std::span<const double> y, Shape shape, double alpha, double beta,
                            const TgvOptions& options) {
  check_params(y, shape, alpha, beta);
  const std::size_t n = shape.size();
  const GradientOperator d = tgv_gradient(shape);
  const SymGradientOperator e(shape);

  // K(u, w) = (D u - w, E w); ||K||^2 <= max(2 ||D||^2, 2 + ||E||^2).
  const double k2 = std::max(2.0 * gradient_norm_squared(shape), 2.0 + symgrad_norm_squared(shape));
  const double step = 0.99 / std::sqrt(k2);

  TgvSolution s;
  s.u.assign(y.begin(), y.end());
  s.w.resize(2 * n);
  d.apply(y, std::span<double>(s.w));
  std::vector<double> u_bar = s.u, w_bar = s.w;
  std::vector<double> p(2 * n, 0.0), q(4 * n, 0.0);
  std::vector<double> du(2 * n), ew(4 * n), dtp(n), etq(2 * n), u_old(n);

  for (std::size_t it = 0; it < options.inner_iters; ++it) {
    d.apply(std::span<const double>(u_bar), std::span<double>(du));
    for (std::size_t i = 0; i < 2 * n; ++i) p[i] += step * (du[i] - w_bar[i]);
    project_groups(p, n, 2, alpha);
    e.apply(std::span<const double>(w_bar), std::span<double>(ew));
    for (std::size_t i = 0; i < 4 * n; ++i) q[i] += step * ew[i];
    project_groups(q, n, 4, beta);

    d.adjoint(std::span<const double>(p), std::span<double>(dtp));
    e.adjoint(std::span<const double>(q), std::span<double>(etq));
    u_old = s.u;
    double change = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double un = (s.u[i] - step * dtp[i] + step * y[i]) / (1.0 + step);
      u_bar[i] = 2.0 * un - s.u[i];
      change = std::max(change, std::abs(un - s.u[i]));
      scale = std::max(scale, std::abs(un));
      s.u[i] = un;
    }
    for (std::size_t i = 0; i < 2 * n; ++i) {
      const double wn = s.w[i] + step * (p[i] - etq[i]);
      w_bar[i] = 2.0 * wn - s.w[i];
      s.w[i] = wn;
    }
    s.iterations = it + 1;
    if (options.tol > 0.0 && it > 0 && change <= options.tol * std::max(scale, 1.0)) break;
  }

  double fit = 0.0;
  for (std::size_t i = 0; i < n; ++i) fit += (s.u[i] - y[i]) * (s.u[i] - y[i]);
  s.primal_objective = 0.5 * fit + tgv2_objective(s.u, s.w, shape, alpha, beta);

  d.adjoint(std::span<const double>(p), std::span<double>(dtp));
  e.adjoint(std::span<const double>(q), std::span<double>(etq));
  double infeas = 0.0;
  for (std::size_t i = 0; i < 2 * n; ++i) infeas += (p[i] - etq[i]) * (p[i] - etq[i]);
  s.dual_infeasibility = std::sqrt(infeas);
  double yy = 0.0, rr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    yy += y[i] * y[i];
    rr += (y[i] - dtp[i]) * (y[i] - dtp[i]);
  }
  s.gap = s.primal_objective - 0.5 * (yy - rr);
  return s;
}

double tgv2_eval(std::span<const double> u, Shape shape, double alpha, double beta,
                 const TgvOptions& options) {
  check_params(u, shape, alpha, beta);
  const std::size_t n = shape.size();
  const GradientOperator d = tgv_gradient(shape);
  const SymGradientOperator e(shape);
  const double step = 0.99 / std::sqrt(1.0 + symgrad_norm_squared(shape));

  std::vector<double> du(2 * n), w(2 * n), w_bar, r(2 * n), ew(4 * n), etq(2 * n);
  std::vector<double> p(2 * n, 0.0), q(4 * n, 0.0);
  d.apply(u, std::span<double>(du));
  w = du;
  w_bar = w;
  double best = tgv2_objective(u, w, shape, alpha, beta);
  for (std::size_t it = 0; it < options.inner_iters; ++it) {
    for (std::size_t i = 0; i < 2 * n; ++i) p[i] += step * (du[i] - w_bar[i]);
    project_groups(p, n, 2, alpha);
    e.apply(std::span<const double>(w_bar), std::span<double>(ew));
    for (std::size_t i = 0; i < 4 * n; ++i) q[i] += step * ew[i];
    project_groups(q, n, 4, beta);
    e.adjoint(std::span<const double>(q), std::span<double>(etq));
    for (std::size_t i = 0; i < 2 * n; ++i) {
      const double wn = w[i] + step * (p[i] - etq[i]);
      w_bar[i] = 2.0 * wn - w[i];
      w[i] = wn;
    }
    best = std::min(best, tgv2_objective(u, w, shape, alpha, beta));
  }
  return best;
}

std::vector<double> tgv2_prox(std::span<const double> u, Shape shape, double alpha, double beta,
                              double step, const TgvOptions& options) {
  if (!(step > 0.0)) throw InvalidInput("tgv2_prox: step must be > 0");
  return tgv2_prox_solve(u, shape, step * alpha, step * beta, options).u;
}

Tgv2::Tgv2(Shape shape, double alpha, double beta, double lambda, TgvOptions options)
    : shape_(shape), alpha_(alpha), beta_(beta), lambda_(lambda), options_(options) {
  if (!(alpha_ > 0.0) || !(beta_ > 0.0)) throw InvalidInput("Tgv2: alpha and beta must be > 0");
  if (!(lambda_ > 0.0)) throw InvalidInput("Tgv2: lambda must be > 0");
}

double Tgv2::eval(std::span<const double> x) const {
  return lambda_ * tgv2_eval(x, shape_, alpha_, beta_, options_);
}

void Tgv2::prox(std::span<const double> x, double step, std::span<double> out) const {
  const auto r = tgv2_prox(x, shape_, alpha_, beta_, step * lambda_, options_);
  std::copy(r.begin(), r.end(), out.begin());
}

}  // namespace proxmag
