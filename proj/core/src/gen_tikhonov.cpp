#include <algorithm>
#include <cmath>

#include "proxmag/regularizers.hpp"

namespace proxmag {

std::vector<double> gen_tikhonov_prox(std::span<const double> r, double weight,
                                      const GradientOperator& d, const CgOptions& options) {
  const std::size_t n = r.size();
  if (n != d.domain().size()) throw InvalidInput("gen_tikhonov_prox: size does not match D");
  if (!(weight >= 0.0)) throw InvalidInput("gen_tikhonov_prox: weight must be >= 0");

  std::vector<double> x(r.begin(), r.end());
  if (weight == 0.0) return x;

  std::vector<double> g(d.range().size()), ap(n), dtg(n);
  auto apply_a = [&](std::span<const double> v, std::span<double> out) {
    d.apply(v, std::span<double>(g));
    d.adjoint(std::span<const double>(g), std::span<double>(dtg));
    for (std::size_t i = 0; i < n; ++i) out[i] = v[i] + weight * dtg[i];
  };
  auto dotp = [](std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };

  const double rnorm = std::sqrt(dotp(r, r));
  if (rnorm == 0.0) return x;

  // Warm start at x = r.
  std::vector<double> res(n), p(n);
  apply_a(x, ap);
  for (std::size_t i = 0; i < n; ++i) res[i] = r[i] - ap[i];
  p = res;
  double rr = dotp(res, res);
  for (std::size_t it = 0; it < options.max_iters; ++it) {
    if (std::sqrt(rr) <= options.tol * rnorm) return x;
    apply_a(p, ap);
    const double alpha = rr / dotp(p, ap);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      res[i] -= alpha * ap[i];
    }
    const double rr_next = dotp(res, res);
    const double beta = rr_next / rr;
    rr = rr_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = res[i] + beta * p[i];
  }
  if (std::sqrt(rr) <= options.tol * rnorm) return x;
  throw ConvergenceError("gen_tikhonov_prox: CG did not reach relative residual " +
                         std::to_string(options.tol) + " in " +
                         std::to_string(options.max_iters) + " iterations");
}

GenTikhonov::GenTikhonov(Shape shape, std::vector<ScaledAxis> axes, double lambda,
                         CgOptions options)
    : d_(shape, std::move(axes)), lambda_(lambda), options_(options) {
  if (!(lambda_ >= 0.0)) throw InvalidInput("GenTikhonov: lambda must be >= 0");
}

double GenTikhonov::eval(std::span<const double> x) const {
  std::vector<double> g(d_.range().size());
  d_.apply(x, std::span<double>(g));
  double s = 0.0;
  for (double v : g) s += v * v;
  return 0.5 * lambda_ * s;
}

void GenTikhonov::prox(std::span<const double> x, double step, std::span<double> out) const {
  const auto r = gen_tikhonov_prox(x, step * lambda_, d_, options_);
  std::copy(r.begin(), r.end(), out.begin());
}

}  // namespace proxmag
