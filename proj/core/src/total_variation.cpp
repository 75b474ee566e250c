#include <algorithm>
#include <cmath>

#include "proxmag/regularizers.hpp"

namespace proxmag {
namespace {

bool isotropic(TvVariant v) {
  return v == TvVariant::iso2d || v == TvVariant::iso3d || v == TvVariant::vectorial ||
         v == TvVariant::spatio_temporal;
}

bool uses_channel_axis(TvVariant v) {
  return v == TvVariant::iso3d || v == TvVariant::aniso3d || v == TvVariant::spatio_temporal;
}

// Groups are per-pixel over the axis blocks for isotropic variants, single
// entries otherwise.
double group_norm_sum(std::span<const double> g, std::size_t n, std::size_t axes, bool iso) {
  double s = 0.0;
  if (iso) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t a = 0; a < axes; ++a) acc += g[a * n + i] * g[a * n + i];
      s += std::sqrt(acc);
    }
  } else {
    for (double v : g) s += std::abs(v);
  }
  return s;
}

void project_dual(std::span<double> q, std::size_t n, std::size_t axes, bool iso, double radius) {
  if (iso) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t a = 0; a < axes; ++a) acc += q[a * n + i] * q[a * n + i];
      const double nrm = std::sqrt(acc);
      if (nrm > radius) {
        const double s = radius / nrm;
        for (std::size_t a = 0; a < axes; ++a) q[a * n + i] *= s;
      }
    }
  } else {
    for (double& v : q) v = std::clamp(v, -radius, radius);
  }
}

}  // namespace

TvVariant parse_tv_variant(const std::string& name) {
  if (name == "iso2d") return TvVariant::iso2d;
  if (name == "aniso2d") return TvVariant::aniso2d;
  if (name == "iso3d") return TvVariant::iso3d;
  if (name == "aniso3d") return TvVariant::aniso3d;
  if (name == "vectorial") return TvVariant::vectorial;
  if (name == "spatio-temporal") return TvVariant::spatio_temporal;
  throw InvalidInput("unknown TV variant '" + name + "'");
}

std::string to_string(TvVariant v) {
  switch (v) {
    case TvVariant::iso2d: return "iso2d";
    case TvVariant::aniso2d: return "aniso2d";
    case TvVariant::iso3d: return "iso3d";
    case TvVariant::aniso3d: return "aniso3d";
    case TvVariant::vectorial: return "vectorial";
    case TvVariant::spatio_temporal: return "spatio-temporal";
  }
  return "?";
}

GradientOperator tv_gradient(Shape shape, TvVariant variant, double channel_weight) {
  if ((variant == TvVariant::iso2d || variant == TvVariant::aniso2d) && shape.channels != 1) {
    throw InvalidInput("TV variant " + to_string(variant) + " needs a single-channel image, got " +
                       to_string(shape) + " (use vectorial or a 3-D variant)");
  }
  std::vector<ScaledAxis> axes;
  if (uses_channel_axis(variant)) axes.push_back({Axis::channel, channel_weight});
  axes.push_back({Axis::row, 1.0});
  axes.push_back({Axis::col, 1.0});
  return GradientOperator(shape, std::move(axes));
}

double tv_eval(std::span<const double> u, Shape shape, TvVariant variant, double channel_weight) {
  if (u.size() != shape.size()) throw InvalidInput("tv_eval: size does not match shape");
  const GradientOperator d = tv_gradient(shape, variant, channel_weight);
  std::vector<double> g(d.range().size());
  d.apply(u, std::span<double>(g));
  return group_norm_sum(g, shape.size(), d.axis_count(), isotropic(variant));
}

std::vector<double> tv_prox(std::span<const double> u, Shape shape, double weight,
                            TvVariant variant, const TvOptions& options, TvProxInfo* info) {
  if (u.size() != shape.size()) throw InvalidInput("tv_prox: size does not match shape");
  if (!(weight >= 0.0)) throw InvalidInput("tv_prox: weight must be >= 0");
  const GradientOperator d = tv_gradient(shape, variant, options.channel_weight);
  const std::size_t n = shape.size();
  const std::size_t axes = d.axis_count();
  const std::size_t m = d.range().size();
  const bool iso = isotropic(variant);

  std::vector<double> x(u.begin(), u.end());
  if (weight == 0.0) {
    if (info) *info = TvProxInfo{};
    return x;
  }

  // Dual: minimise phi(q) = 0.5 ||u - D^T q||^2 - 0.5 ||u||^2 over |q_g| <= weight,
  // with x = u - D^T q. Monotone FISTA.
  const double lip = std::max(d.norm_squared_bound(), 1e-300);
  std::vector<double> q(m, 0.0), q_prev(m, 0.0), yk(m, 0.0), z(m), dtq(n), grad(m), resid(n);
  auto phi = [&](std::span<const double> p) {
    d.adjoint(p, std::span<double>(dtq));
    double a = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = u[i] - dtq[i];
      a += r * r - u[i] * u[i];
    }
    return 0.5 * a;
  };

  double phi_q = 0.0;
  double t_k = 1.0;
  TvProxInfo local;
  for (std::size_t it = 0; it < options.inner_iters; ++it) {
    d.adjoint(std::span<const double>(yk), std::span<double>(dtq));
    for (std::size_t i = 0; i < n; ++i) resid[i] = u[i] - dtq[i];
    d.apply(std::span<const double>(resid), std::span<double>(grad));
    for (std::size_t i = 0; i < m; ++i) z[i] = yk[i] + grad[i] / lip;
    project_dual(z, n, axes, iso, weight);

    const double phi_z = phi(z);
    q_prev = q;
    if (phi_z <= phi_q) {
      q = z;
      phi_q = phi_z;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_k * t_k));
    for (std::size_t i = 0; i < m; ++i) {
      yk[i] = q[i] + (t_k / t_next) * (z[i] - q[i]) + ((t_k - 1.0) / t_next) * (q[i] - q_prev[i]);
    }
    t_k = t_next;
    local.dual_objective.push_back(phi_q);
    local.iterations = it + 1;

    if (options.gap_tol > 0.0) {
      d.adjoint(std::span<const double>(q), std::span<double>(dtq));
      for (std::size_t i = 0; i < n; ++i) x[i] = u[i] - dtq[i];
      double fit = 0.0;
      for (std::size_t i = 0; i < n; ++i) fit += (x[i] - u[i]) * (x[i] - u[i]);
      const double primal = weight * tv_eval(x, shape, variant, options.channel_weight) + 0.5 * fit;
      if (primal + phi_q < options.gap_tol) break;
    }
  }

  d.adjoint(std::span<const double>(q), std::span<double>(dtq));
  for (std::size_t i = 0; i < n; ++i) x[i] = u[i] - dtq[i];
  if (info) {
    double fit = 0.0;
    for (std::size_t i = 0; i < n; ++i) fit += (x[i] - u[i]) * (x[i] - u[i]);
    const double primal = weight * tv_eval(x, shape, variant, options.channel_weight) + 0.5 * fit;
    local.duality_gap = primal + phi_q;
    *info = std::move(local);
  }
  return x;
}

TotalVariation::TotalVariation(Shape shape, TvVariant variant, double lambda, TvOptions options)
    : shape_(shape), variant_(variant), lambda_(lambda), options_(options) {
  if (!(lambda_ >= 0.0)) throw InvalidInput("TotalVariation: lambda must be >= 0");
  (void)tv_gradient(shape_, variant_, options_.channel_weight);
}

double TotalVariation::eval(std::span<const double> x) const {
  return lambda_ * tv_eval(x, shape_, variant_, options_.channel_weight);
}

void TotalVariation::prox(std::span<const double> x, double step, std::span<double> out) const {
  const auto r = tv_prox(x, shape_, step * lambda_, variant_, options_);
  std::copy(r.begin(), r.end(), out.begin());
}

}  // namespace proxmag
