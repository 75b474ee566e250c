#include <algorithm>
#include <cmath>

#include "proxmag/regularizers.hpp"

namespace proxmag {
namespace {

double weight_at(std::span<const double> w, std::size_t i) { return w.empty() ? 1.0 : w[i]; }

void check_weights(std::span<const double> x, std::span<const double> w) {
  if (!w.empty() && w.size() != x.size()) throw InvalidInput("weighted_lp: weight size mismatch");
  for (double v : w) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput("weighted_lp: weights must be > 0");
  }
}

bool uniform(std::span<const double> w) {
  return w.empty() || std::all_of(w.begin(), w.end(), [&](double v) { return v == w[0]; });
}

}  // namespace

double weighted_lp_eval(std::span<const double> x, std::span<const double> w, int p) {
  check_weights(x, w);
  if (p == 1) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += weight_at(w, i) * std::abs(x[i]);
    return s;
  }
  if (p == 2) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double v = weight_at(w, i) * x[i];
      s += v * v;
    }
    return std::sqrt(s);
  }
  throw Unsupported("weighted_lp: p must be 1 or 2");
}

std::vector<double> weighted_lp_prox(std::span<const double> x, std::span<const double> w, int p,
                                     double step) {
  check_weights(x, w);
  if (!(step >= 0.0)) throw InvalidInput("weighted_lp_prox: step must be >= 0");
  std::vector<double> out(x.size());
  if (p == 1) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = step * weight_at(w, i);
      const double a = std::abs(x[i]) - t;
      out[i] = a > 0.0 ? std::copysign(a, x[i]) : 0.0;
    }
    return out;
  }
  if (p != 2) throw Unsupported("weighted_lp: p must be 1 or 2");

  if (uniform(w)) {
    const double t = step * (w.empty() ? 1.0 : w[0]);
    double nrm = 0.0;
    for (double v : x) nrm += v * v;
    nrm = std::sqrt(nrm);
    const double s = nrm > t ? 1.0 - t / nrm : 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = s * x[i];
    return out;
  }

  // Optimality: x_i = v_i s / (s + t w_i^2) with s = ||W x||, which is the
  // root of phi(s) = sum w_i^2 v_i^2 / (s + t w_i^2)^2 - 1.
  const double t = step;
  double dual = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = x[i] / w[i];
    dual += r * r;
  }
  if (std::sqrt(dual) <= t) {
    std::fill(out.begin(), out.end(), 0.0);
    return out;
  }
  auto phi = [&](double s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = s + t * w[i] * w[i];
      acc += w[i] * w[i] * x[i] * x[i] / (d * d);
    }
    return acc - 1.0;
  };
  double lo = 0.0;
  double hi = weighted_lp_eval(x, w, 2);
  if (hi <= 0.0) hi = 1.0;
  while (phi(hi) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) > 0.0 ? lo : hi) = mid;
  }
  const double s = 0.5 * (lo + hi);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * s / (s + t * w[i] * w[i]);
  return out;
}

WeightedLpNorm::WeightedLpNorm(Shape shape, int p, double lambda, std::vector<double> weights)
    : shape_(shape), p_(p), lambda_(lambda), weights_(std::move(weights)) {
  if (p_ != 1 && p_ != 2) throw Unsupported("WeightedLpNorm: p must be 1 or 2");
  if (!(lambda_ >= 0.0)) throw InvalidInput("WeightedLpNorm: lambda must be >= 0");
  if (!weights_.empty() && weights_.size() != shape_.size()) {
    throw InvalidInput("WeightedLpNorm: weights must match the image size");
  }
}

double WeightedLpNorm::eval(std::span<const double> x) const {
  return lambda_ * weighted_lp_eval(x, weights_, p_);
}

void WeightedLpNorm::prox(std::span<const double> x, double step, std::span<double> out) const {
  const auto r = weighted_lp_prox(x, weights_, p_, step * lambda_);
  std::copy(r.begin(), r.end(), out.begin());
}

SquaredL2::SquaredL2(Shape shape, double lambda) : shape_(shape), lambda_(lambda) {
  if (!(lambda_ >= 0.0)) throw InvalidInput("SquaredL2: lambda must be >= 0");
}

double SquaredL2::eval(std::span<const double> x) const {
  double s = 0.0;
  for (double v : x) s += v * v;
  return lambda_ * s;
}

void SquaredL2::prox(std::span<const double> x, double step, std::span<double> out) const {
  const double c = 1.0 / (1.0 + 2.0 * lambda_ * step);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = c * x[i];
}

}  // namespace proxmag
