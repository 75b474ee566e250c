#include <algorithm>
#include <cmath>
#include <random>

#include "proxmag/prox.hpp"

namespace proxmag {

double complex_prox_objective(const ProxFunction& h, std::span<const cplx> y,
                              std::span<const cplx> z, double step) {
  std::vector<double> mag(y.size());
  double dist2 = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    mag[i] = std::abs(y[i]);
    dist2 += std::norm(y[i] - z[i]);
  }
  return step * h.eval(mag) + 0.5 * dist2;
}

namespace {

class PatternSearch {
 public:
  PatternSearch(const ProxFunction& h, std::span<const cplx> z, double step)
      : h_(h), z_(z), step_(step), mag_(z.size()) {}

  double objective(const std::vector<double>& v) {
    double dist2 = 0.0;
    for (std::size_t i = 0; i < z_.size(); ++i) {
      const double re = v[2 * i];
      const double im = v[2 * i + 1];
      mag_[i] = std::hypot(re, im);
      const double dr = re - z_[i].real();
      const double di = im - z_[i].imag();
      dist2 += dr * dr + di * di;
    }
    const double hv = h_.eval(mag_);
    if (!std::isfinite(hv)) return kInfinity;
    return step_ * hv + 0.5 * dist2;
  }

  // Compass search over coordinate axes plus random directions; step halves
  // after two sweeps without improvement.
  double run(std::vector<double>& v, const OracleOptions& opt, std::mt19937_64& rng,
             double h0) {
    const std::size_t dim = v.size();
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> trial(dim);
    std::vector<double> dir(dim);
    double best = objective(v);
    double h = h0;
    int failures = 0;

    auto try_direction = [&](const std::vector<double>& d, double scale) {
      for (int sgn : {1, -1}) {
        for (std::size_t k = 0; k < dim; ++k) trial[k] = v[k] + sgn * scale * d[k];
        const double f = objective(trial);
        if (f < best) {
          best = f;
          v = trial;
          return true;
        }
      }
      return false;
    };

    for (std::size_t it = 0; it < opt.iters && h >= opt.min_step; ++it) {
      bool improved = false;
      for (std::size_t k = 0; k < dim; ++k) {
        std::fill(dir.begin(), dir.end(), 0.0);
        dir[k] = 1.0;
        improved |= try_direction(dir, h);
      }
      for (std::size_t r = 0; r < 4 * dim; ++r) {
        double nrm = 0.0;
        for (auto& d : dir) {
          d = normal(rng);
          nrm += d * d;
        }
        nrm = std::sqrt(nrm);
        for (auto& d : dir) d /= nrm;
        improved |= try_direction(dir, h);
      }
      failures = improved ? 0 : failures + 1;
      if (failures >= 2) {
        h *= 0.5;
        failures = 0;
      }
    }
    return best;
  }

 private:
  const ProxFunction& h_;
  std::span<const cplx> z_;
  double step_;
  std::vector<double> mag_;
};

}  // namespace

ComplexImage brute_force_prox_oracle(const ProxFunction& h, const ComplexImage& z, double step,
                                     const OracleOptions& options) {
  const std::size_t n = z.size();
  if (h.size() != n) throw InvalidInput("brute_force_prox_oracle: shape mismatch");
  if (n > 16) throw InvalidInput("brute_force_prox_oracle: at most 16 samples");

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double scale = 1.0;
  for (const cplx& c : z.data()) scale = std::max(scale, std::abs(c));

  PatternSearch search(h, z.data(), step);
  std::vector<double> best_v;
  double best_f = kInfinity;
  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);
  const bool warm = !options.start.empty();
  if (warm && options.start.size() != n) throw InvalidInput("brute_force_prox_oracle: bad start");
  for (std::size_t s = 0; s < restarts + (warm ? 1 : 0); ++s) {
    std::vector<double> v(2 * n, 0.0);
    if (s == restarts) {
      for (std::size_t i = 0; i < n; ++i) {
        v[2 * i] = options.start[i].real();
        v[2 * i + 1] = options.start[i].imag();
      }
    } else if (s == 0) {
      for (std::size_t i = 0; i < n; ++i) {
        v[2 * i] = z.data()[i].real();
        v[2 * i + 1] = z.data()[i].imag();
      }
    } else if (s >= 2) {
      for (std::size_t i = 0; i < n; ++i) {
        v[2 * i] = z.data()[i].real() + 0.5 * scale * normal(rng);
        v[2 * i + 1] = z.data()[i].imag() + 0.5 * scale * normal(rng);
      }
    }
    const double f = search.run(v, options, rng, options.initial_step);
    if (best_v.empty() || f < best_f) {
      best_f = f;
      best_v = v;
    }
  }

  // Restart from the incumbent with a fresh, smaller step until that stops paying.
  for (int round = 0; round < 8; ++round) {
    std::vector<double> v = best_v;
    const double f = search.run(v, options, rng, 1e-2 * options.initial_step);
    if (!(f < best_f - 1e-15)) break;
    best_f = f;
    best_v = std::move(v);
  }

  std::vector<cplx> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = {best_v[2 * i], best_v[2 * i + 1]};
  return ComplexImage(z.shape(), std::move(y));
}

}  // namespace proxmag
