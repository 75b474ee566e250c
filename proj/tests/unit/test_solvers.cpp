#include <doctest.h>

#include <limits>

#include "proxmag/regularizers.hpp"
#include "proxmag/sar.hpp"
#include "proxmag/solvers.hpp"
#include "test_util.hpp"

using namespace proxmag;
using testutil::Rng;

namespace {

ComplexProx data_conj(std::vector<cplx> d) {
  return [d = std::move(d)](std::span<const cplx> in, double s, std::span<cplx> out) {
    const auto r = prox_l2_data_conjugate(in, s, d);
    std::copy(r.begin(), r.end(), out.begin());
  };
}

double lasso_objective(const Eigen::MatrixXd& k, const Eigen::VectorXd& d, const Eigen::VectorXd& x,
                       double lambda) {
  return 0.5 * (k * x - d).squaredNorm() + lambda * x.lpNorm<1>();
}

struct Problem {
  SarGeometry geometry;
  SceneGrid grid;
  std::shared_ptr<const LinearOperator> op;
  Simulation sim;
};

Problem small_problem(std::size_t channels, std::uint64_t seed) {
  CollectionOptions o;
  o.pulses = 12;
  o.frequencies = 24;
  o.aperture_deg = 3.0;
  Problem p{linear_collection(o), SceneGrid::centered(10, 10, 0.4), nullptr, {}};
  auto single = std::make_shared<FrequencyDomainSarOperator>(p.geometry, p.grid);
  p.op = channels == 1 ? std::shared_ptr<const LinearOperator>(single)
                       : std::make_shared<MultiChannelOperator>(
                             std::vector<std::shared_ptr<const LinearOperator>>(channels, single));
  const auto one = rasterize(default_phantom(p.grid), p.grid);
  std::vector<double> mag;
  for (std::size_t c = 0; c < channels; ++c) mag.insert(mag.end(), one.begin(), one.end());
  NoiseSpec noise;
  noise.snr_db = 20.0;
  p.sim = simulate(*p.op, mag, noise, seed);
  return p;
}

double misfit(const LinearOperator& a, std::span<const cplx> x, std::span<const cplx> d) {
  const auto ax = a.apply(x);
  double s = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) s += std::norm(ax[i] - d[i]);
  return 0.5 * s;
}

}  // namespace

TEST_CASE("l2 data conjugate prox") {
  const std::vector<cplx> y = {cplx{2.0, -4.0}, cplx{1.0, 1.0}};
  const std::vector<cplx> zero(2, 0.0);
  const auto h = prox_l2_data_conjugate(y, 1.0, zero);
  CHECK(h[0] == cplx{1.0, -2.0});
  CHECK(h[1] == cplx{0.5, 0.5});
  CHECK_THROWS_AS((void)prox_l2_data_conjugate(y, 1e-13, zero), InvalidInput);

  // Moreau: y = prox_{s f*}(y) + s prox_{f/s}(y/s), prox_{f/s}(v) = (s v + d)/(1 + s).
  Rng rng(1);
  const auto d = rng.complex_normals(4), yy = rng.complex_normals(4);
  for (double s : {0.1, 1.0, 7.0}) {
    const auto p = prox_l2_data_conjugate(yy, s, d);
    for (std::size_t i = 0; i < 4; ++i) {
      const cplx direct = (s * (yy[i] / s) + d[i]) / (1.0 + s);
      CHECK(std::abs(p[i] + s * direct - yy[i]) < 1e-12);
    }
  }
}

TEST_CASE("pdhg on the identity recovers the data") {
  Rng rng(2);
  const auto d = rng.complex_normals(20);
  IdentityOperator k({1, 4, 5});
  const ComplexProx zero = [](std::span<const cplx> in, double, std::span<cplx> out) {
    std::copy(in.begin(), in.end(), out.begin());
  };
  SolverConfig cfg;
  cfg.max_iters = 200;
  const auto res = pdhg(data_conj(d), zero, k, std::vector<cplx>(20, 0.0), cfg);
  CHECK(testutil::rel_diff(res.x, d) < 1e-6);
  CHECK(res.sigma * res.tau * 1.0 <= 1.0);
}

TEST_CASE("pdhg with a nonnegativity constraint on magnitudes stays feasible") {
  const std::vector<cplx> d = {cplx{-1.0, 0.0}, cplx{2.0, 0.0}};
  IdentityOperator k({1, 1, 2});
  const BoxIndicator box({1, 1, 2}, 0.0, kInfinity);
  const ComplexProx g = [&](std::span<const cplx> in, double s, std::span<cplx> out) {
    magnitude_lift(box, in, s, {}, out);
  };
  const auto res = pdhg(data_conj(d), g, k, std::vector<cplx>(2, 0.0), SolverConfig{});
  for (const cplx& x : res.x) CHECK(std::abs(x) >= 0.0);
  CHECK(std::abs(res.x[0] - d[0]) < 1e-6);
}

TEST_CASE("pdhg lasso against coordinate descent") {
  Rng rng(3);
  const int m = 10, n = 8;
  Eigen::MatrixXd km(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) km(i, j) = rng.normal();
  Eigen::VectorXd dv(m);
  for (int i = 0; i < m; ++i) dv(i) = rng.normal();
  const double lambda = 0.7;

  // Cyclic coordinate descent with exact coordinate minimisation.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (int sweep = 0; sweep < 20000; ++sweep) {
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXd r = dv - km * x + km.col(j) * x(j);
      const double rho = km.col(j).dot(r), z = km.col(j).squaredNorm();
      x(j) = std::copysign(std::max(std::abs(rho) - lambda, 0.0), rho) / z;
    }
  }

  std::vector<cplx> entries;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) entries.emplace_back(km(i, j), 0.0);
  DenseOperator k(m, n, entries);
  std::vector<cplx> d(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) d[static_cast<std::size_t>(i)] = dv(i);
  const WeightedLpNorm l1({1, 1, static_cast<std::size_t>(n)}, 1, lambda);
  const ComplexProx g = [&](std::span<const cplx> in, double s, std::span<cplx> out) {
    magnitude_lift(l1, in, s, {}, out);
  };
  SolverConfig cfg;
  cfg.max_iters = 20000;
  const auto res = pdhg(data_conj(d), g, k, std::vector<cplx>(static_cast<std::size_t>(n), 0.0), cfg);
  Eigen::VectorXd xp(n);
  for (int j = 0; j < n; ++j) {
    CHECK(std::abs(res.x[static_cast<std::size_t>(j)].imag()) < 1e-12);
    xp(j) = res.x[static_cast<std::size_t>(j)].real();
  }
  CHECK(std::abs(lasso_objective(km, dv, xp, lambda) - lasso_objective(km, dv, x, lambda)) < 1e-5);
}

TEST_CASE("pdhg guards") {
  IdentityOperator k({1, 1, 3});
  const ComplexProx id = [](std::span<const cplx> in, double, std::span<cplx> out) {
    std::copy(in.begin(), in.end(), out.begin());
  };
  SolverConfig cfg;
  cfg.tau = 2.0;
  cfg.sigma = 2.0;
  CHECK_THROWS_AS((void)pdhg(data_conj(std::vector<cplx>(3, 1.0)), id, k, std::vector<cplx>(3, 0.0), cfg),
                  InvalidInput);

  const ComplexProx poison = [](std::span<const cplx>, double, std::span<cplx> out) {
    for (auto& v : out) v = std::numeric_limits<double>::quiet_NaN();
  };
  const ObjectiveFn obj = [](std::span<const cplx>) { return ObjectiveParts{1.0, 0.0}; };
  try {
    (void)pdhg(data_conj(std::vector<cplx>(3, 1.0)), poison, k, std::vector<cplx>(3, 0.0),
               SolverConfig{}, obj);
    FAIL("expected SolverNumericalError");
  } catch (const SolverNumericalError& e) {
    CHECK(!e.trace().entries.empty());
  }
}

TEST_CASE("douglas-rachford") {
  const RealProx id = [](std::span<const double> in, std::span<double> out) {
    std::copy(in.begin(), in.end(), out.begin());
  };
  const std::vector<double> y0 = {1.5, -2.0};
  const auto st = douglas_rachford(id, id, y0, 10, 1e-12);
  CHECK(st.x == y0);
  CHECK(st.iterations <= 2);

  const double a = 3.0, b = -1.0;
  const RealProx pa = [a](std::span<const double> in, std::span<double> out) { out[0] = 0.5 * (in[0] + a); };
  const RealProx pb = [b](std::span<const double> in, std::span<double> out) { out[0] = 0.5 * (in[0] + b); };
  const auto s2 = douglas_rachford(pa, pb, std::vector<double>{0.0}, 200, 1e-12);
  CHECK(s2.x[0] == doctest::Approx(1.0).epsilon(1e-9));

  const RealProx drift = [](std::span<const double> in, std::span<double> out) { out[0] = in[0] + 1.0; };
  CHECK_THROWS_AS((void)douglas_rachford(drift, drift, std::vector<double>{0.0}, 5, 1e-12),
                  DrConvergenceError);
}

TEST_CASE("reconstruction") {
  SUBCASE("lambda zero does not increase the misfit of the start") {
    const auto p = small_problem(1, 1);
    ReconstructOptions o;
    o.solver.max_iters = 50;
    const auto r = reconstruct(*p.op, p.sim.data, "tv-iso", 0.0, {}, o);
    CHECK(misfit(*p.op, r.image.data(), p.sim.data.data()) <=
          misfit(*p.op, r.initial.data(), p.sim.data.data()));
    const auto& e = r.trace.entries;
    REQUIRE(e.size() == 51);
    for (std::size_t k = e.size() - 10; k < e.size(); ++k) CHECK(e[k].misfit <= e[k - 1].misfit + 1e-12);
  }
  SUBCASE("convex regulariser ends below the start and keeps the prox phase") {
    const auto p = small_problem(1, 2);
    ReconstructOptions o;
    o.solver.max_iters = 60;
    const auto r = reconstruct(*p.op, p.sim.data, "tv-iso", 0.01, {}, o);
    CHECK(r.trace.entries.back().objective <= r.trace.entries.front().objective);
    const auto in = r.last_prox_input;
    REQUIRE(in.size() == r.image.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
      const cplx x = r.image.data()[i];
      if (std::abs(x) > 0.0) CHECK(std::abs(x / std::abs(x) - unit_phase(in[i])) < 1e-12);
    }
  }
  SUBCASE("multi-channel generalised Tikhonov settles monotonically") {
    const auto p = small_problem(3, 3);
    ReconstructOptions o;
    o.solver.max_iters = 60;
    const auto r = reconstruct(*p.op, p.sim.data, "gtik", 0.05, {{"channel_weight", 10.0}}, o);
    const auto& e = r.trace.entries;
    for (std::size_t k = 6; k < e.size(); ++k) CHECK(e[k].objective <= e[k - 1].objective * (1 + 1e-12));
  }
  SUBCASE("traces are deterministic") {
    const auto p = small_problem(1, 4);
    ReconstructOptions o;
    o.solver.max_iters = 15;
    const auto a = reconstruct(*p.op, p.sim.data, "l1", 0.02, {}, o);
    const auto b = reconstruct(*p.op, p.sim.data, "l1", 0.02, {}, o);
    CHECK(a.image == b.image);
    for (std::size_t k = 0; k < a.trace.entries.size(); ++k) {
      CHECK(a.trace.entries[k].objective == b.trace.entries[k].objective);
    }
  }
  SUBCASE("unknown regulariser") {
    const auto p = small_problem(1, 5);
    CHECK_THROWS_AS((void)reconstruct(*p.op, p.sim.data, "bogus", 0.1, {}), InvalidInput);
  }
}

TEST_CASE("metrics and trace export") {
  const std::vector<cplx> truth = {cplx{1.0, 0.0}, cplx{0.0, 0.5}};
  const std::vector<cplx> est = {cplx{0.0, 0.9}, cplx{0.5, 0.0}};
  // MSE = (0.01 + 0) / 2, peak 1.
  CHECK(magnitude_psnr(est, truth) == doctest::Approx(10.0 * std::log10(1.0 / 0.005)));
  const std::vector<cplx> doubled = {cplx{2.0, 0.0}, cplx{0.0, 1.0}};
  CHECK(best_magnitude_scale(doubled, truth) == doctest::Approx(0.5));

  SolverTrace t;
  t.entries.push_back({0, 1.5, 1.0, 0.5, 0.0, 0.0});
  const auto csv = trace_csv(t);
  CHECK(csv.rfind("iteration,objective,misfit,reg,step_change,seconds\n", 0) == 0);
  CHECK(csv.find("\n0,") != std::string::npos);
}
