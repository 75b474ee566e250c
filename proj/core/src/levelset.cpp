#include "proxmag/levelset.hpp"

#include <Eigen/Core>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>

#include "proxmag/parallel.hpp"

namespace proxmag {

void LevelSetParams::validate() const {
  const std::size_t n = alpha.size();
  if (n == 0) throw InvalidInput("LevelSetParams: at least one basis function required");
  if (centers.size() != n || beta.size() != n || gamma.size() != n) {
    throw InvalidInput("LevelSetParams: alpha, centers, beta and gamma must have equal length");
  }
  if (!(c_high > c_low) || !(c_low >= 0.0)) {
    throw InvalidInput("LevelSetParams: need c_high > c_low >= 0");
  }
  if (!(width > 0.0)) throw InvalidInput("LevelSetParams: width must be > 0");
  if (!std::isfinite(level)) throw InvalidInput("LevelSetParams: level must be finite");
}

std::vector<double> LevelSetParams::pack() const {
  const std::size_t n = alpha.size();
  std::vector<double> p(4 * n);
  for (std::size_t j = 0; j < n; ++j) {
    p[j] = alpha[j];
    p[n + j] = beta[j][0];
    p[2 * n + j] = beta[j][1];
    p[3 * n + j] = gamma[j];
  }
  return p;
}

void LevelSetParams::unpack(std::span<const double> p) {
  const std::size_t n = alpha.size();
  if (p.size() != 4 * n) throw InvalidInput("LevelSetParams::unpack: size mismatch");
  for (std::size_t j = 0; j < n; ++j) {
    alpha[j] = p[j];
    beta[j] = {p[n + j], p[2 * n + j]};
    gamma[j] = p[3 * n + j];
  }
}

void to_json(nlohmann::json& j, const LevelSetParams& p) {
  j = nlohmann::json{{"alpha", p.alpha},   {"centers", p.centers}, {"beta", p.beta},
                     {"gamma", p.gamma},   {"c_high", p.c_high},   {"c_low", p.c_low},
                     {"level", p.level},   {"width", p.width}};
}

void from_json(const nlohmann::json& j, LevelSetParams& p) {
  for (const auto& [key, value] : j.items()) {
    static const char* known[] = {"alpha", "centers", "beta", "gamma",
                                  "c_high", "c_low", "level", "width"};
    if (std::none_of(std::begin(known), std::end(known), [&](const char* k) { return key == k; })) {
      throw InvalidInput("LevelSetParams: unknown key '" + key + "'");
    }
  }
  p.alpha = j.at("alpha").get<std::vector<double>>();
  p.centers = j.at("centers").get<std::vector<std::array<double, 2>>>();
  p.beta = j.contains("beta") ? j.at("beta").get<std::vector<std::array<double, 2>>>()
                              : std::vector<std::array<double, 2>>(p.alpha.size(), {0.0, 0.0});
  p.gamma = j.contains("gamma") ? j.at("gamma").get<std::vector<double>>()
                                : std::vector<double>(p.alpha.size(), 0.0);
  p.c_high = j.value("c_high", 1.0);
  p.c_low = j.value("c_low", 0.0);
  p.level = j.value("level", 0.05);
  p.width = j.value("width", 0.0025);
  p.validate();
}

double wendland_c2(double rho) {
  if (rho >= 1.0) return 0.0;
  const double a = 1.0 - rho;
  return a * a * a * a * (4.0 * rho + 1.0);
}

double logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

namespace {

struct Basis {
  double cx, cy, e1, e2, cg, sg, weight, dweight;
};

std::vector<Basis> prepare(const LevelSetParams& p) {
  std::vector<Basis> b(p.alpha.size());
  for (std::size_t j = 0; j < b.size(); ++j) {
    const double s = logistic(p.alpha[j]);
    b[j] = {p.centers[j][0], p.centers[j][1], std::exp(p.beta[j][0]), std::exp(p.beta[j][1]),
            std::cos(p.gamma[j]), std::sin(p.gamma[j]), s, s * (1.0 - s)};
  }
  return b;
}

}  // namespace

std::vector<double> palentir_render(const LevelSetParams& p, const SceneGrid& grid) {
  p.validate();
  const auto basis = prepare(p);
  std::vector<double> f(grid.pixels());
  parallel_for(grid.height, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      for (std::size_t jx = 0; jx < grid.width; ++jx) {
        double phi = 0.0;
        for (const Basis& b : basis) {
          const double d0 = grid.x(jx) - b.cx, d1 = grid.y(i) - b.cy;
          const double s0 = b.e1 * (b.cg * d0 - b.sg * d1);
          const double s1 = b.e2 * (b.sg * d0 + b.cg * d1);
          phi += b.weight * wendland_c2(std::hypot(s0, s1));
        }
        const double t = logistic((phi - p.level) / p.width);
        f[i * grid.width + jx] = p.c_high * t + p.c_low * (1.0 - t);
      }
    }
  });
  return f;
}

std::vector<double> palentir_jacobian(const LevelSetParams& p, const SceneGrid& grid) {
  p.validate();
  const auto basis = prepare(p);
  const std::size_t n = basis.size();
  const std::size_t cols = 4 * n;
  std::vector<double> jac(grid.pixels() * cols, 0.0);
  parallel_for(grid.height, [&](std::size_t i0, std::size_t i1) {
    std::vector<double> dphi(cols);
    for (std::size_t i = i0; i < i1; ++i) {
      for (std::size_t jx = 0; jx < grid.width; ++jx) {
        double phi = 0.0;
        std::fill(dphi.begin(), dphi.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
          const Basis& b = basis[j];
          const double d0 = grid.x(jx) - b.cx, d1 = grid.y(i) - b.cy;
          const double u0 = b.cg * d0 - b.sg * d1;
          const double u1 = b.sg * d0 + b.cg * d1;
          const double s0 = b.e1 * u0, s1 = b.e2 * u1;
          const double rho = std::hypot(s0, s1);
          if (rho >= 1.0) continue;
          const double psi = wendland_c2(rho);
          phi += b.weight * psi;
          // d psi / d rho = -20 rho (1 - rho)^3, times d rho / d param.
          const double a = 1.0 - rho;
          const double g = -20.0 * a * a * a * b.weight;
          dphi[j] = b.dweight * psi;
          dphi[n + j] = g * s0 * s0;
          dphi[2 * n + j] = g * s1 * s1;
          dphi[3 * n + j] = g * (-s0 * b.e1 * u1 + s1 * b.e2 * u0);
        }
        const double t = logistic((phi - p.level) / p.width);
        const double df = (p.c_high - p.c_low) * t * (1.0 - t) / p.width;
        double* row = jac.data() + (i * grid.width + jx) * cols;
        for (std::size_t k = 0; k < cols; ++k) row[k] = df * dphi[k];
      }
    }
  });
  return jac;
}

namespace {

double half_sq_misfit(std::span<const double> f, std::span<const double> r) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += (f[i] - r[i]) * (f[i] - r[i]);
  return 0.5 * s;
}

}  // namespace

LevelSetProjection levelset_project(std::span<const double> r, const SceneGrid& grid,
                                    const LevelSetParams& p0, const LevelSetOptions& options) {
  p0.validate();
  if (r.size() != grid.pixels()) throw InvalidInput("levelset_project: image does not match grid");
  for (double v : r) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidInput("levelset_project: input must be nonnegative and finite");
    }
  }

  LevelSetProjection out;
  out.params = p0;
  out.image = palentir_render(p0, grid);
  double obj = half_sq_misfit(out.image, r);
  out.objective.push_back(obj);

  const auto m = static_cast<Eigen::Index>(grid.pixels());
  const auto k = static_cast<Eigen::Index>(p0.free_count());
  LevelSetParams trial = p0;
  for (std::size_t it = 0; it < options.gn_iters; ++it) {
    if (obj <= options.objective_tol) break;
    const auto jac = palentir_jacobian(out.params, grid);
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        J(jac.data(), m, k);
    Eigen::VectorXd res(m);
    for (Eigen::Index i = 0; i < m; ++i) res[i] = r[static_cast<std::size_t>(i)] - out.image[static_cast<std::size_t>(i)];

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
    cod.setThreshold(1e-10);
    cod.compute(J);
    const Eigen::VectorXd delta = cod.solve(res);
    if (!delta.allFinite()) break;

    const std::vector<double> p = out.params.pack();
    std::vector<double> pt(p.size());
    double step = 1.0;
    bool accepted = false;
    for (std::size_t bt = 0; bt <= options.max_backtracks; ++bt, step *= 0.5) {
      for (std::size_t q = 0; q < p.size(); ++q) pt[q] = p[q] + step * delta[static_cast<Eigen::Index>(q)];
      trial.unpack(pt);
      auto image = palentir_render(trial, grid);
      const double o = half_sq_misfit(image, r);
      if (o < obj) {
        const double decrease = (obj - o) / std::max(obj, 1e-300);
        out.params = trial;
        out.image = std::move(image);
        obj = o;
        out.objective.push_back(obj);
        out.iterations = it + 1;
        accepted = true;
        if (decrease < options.relative_decrease_tol) it = options.gn_iters;
        break;
      }
    }
    if (!accepted) {
      out.stalled = true;
      break;
    }
  }
  return out;
}

LevelSetProx levelset_prox_complex(const ComplexImage& z, const SceneGrid& grid,
                                   const LevelSetParams& p0, const LevelSetOptions& options) {
  if (z.shape().channels != 1) throw InvalidInput("levelset_prox_complex: single channel only");
  if (z.shape().height != grid.height || z.shape().width != grid.width) {
    throw InvalidInput("levelset_prox_complex: image does not match grid");
  }
  MagPhase mp = decompose(z);
  LevelSetProx out;
  out.projection = levelset_project(mp.magnitude, grid, p0, options);
  mp.magnitude = out.projection.image;
  out.image = recompose(mp);
  return out;
}

}  // namespace proxmag
