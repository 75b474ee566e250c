#include <doctest.h>

#include <Eigen/QR>

#include "proxmag/exact_oracles.hpp"
#include "proxmag/gradient.hpp"
#include "proxmag/registry.hpp"
#include "proxmag/regularizers.hpp"
#include "test_util.hpp"

using namespace proxmag;
using testutil::Rng;

namespace {

// Forward differences with a zero last difference, one block per axis, built
// entry by entry.
Eigen::MatrixXd dense_gradient(std::size_t h, std::size_t w) {
  const auto n = static_cast<Eigen::Index>(h * w);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2 * n, n);
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = 0; j < w; ++j) {
      const auto p = static_cast<Eigen::Index>(i * w + j);
      if (i + 1 < h) {
        d(p, p) = -1.0;
        d(p, p + static_cast<Eigen::Index>(w)) = 1.0;
      }
      if (j + 1 < w) {
        d(n + p, p) = -1.0;
        d(n + p, p + 1) = 1.0;
      }
    }
  }
  return d;
}

std::vector<double> rows_of(const Eigen::MatrixXd& m) {
  std::vector<double> out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    bool nonzero = false;
    for (Eigen::Index c = 0; c < m.cols(); ++c) nonzero = nonzero || m(r, c) != 0.0;
    if (!nonzero) continue;
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  }
  return out;
}

double tv_objective(std::span<const double> x, std::span<const double> u, Shape s,
                    TvVariant v, double weight) {
  double f = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) f += 0.5 * (x[i] - u[i]) * (x[i] - u[i]);
  return f + weight * tv_eval(x, s, v);
}

// Chambolle's projection algorithm for isotropic TV, written independently
// of the library.
std::vector<double> chambolle_iso(const std::vector<double>& u, std::size_t h, std::size_t w,
                                  double lambda, std::size_t iters) {
  const std::size_t n = h * w;
  std::vector<double> px(n, 0.0), py(n, 0.0), x(n);
  auto div = [&](std::vector<double>& out) {
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j) {
        const std::size_t p = i * w + j;
        double d = 0.0;
        d += (i + 1 < h ? py[p] : 0.0) - (i > 0 ? py[p - w] : 0.0);
        d += (j + 1 < w ? px[p] : 0.0) - (j > 0 ? px[p - 1] : 0.0);
        out[p] = d;
      }
  };
  std::vector<double> dv(n);
  const double tau = 0.125;
  for (std::size_t k = 0; k < iters; ++k) {
    div(dv);
    for (std::size_t p = 0; p < n; ++p) x[p] = dv[p] - u[p] / lambda;
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j) {
        const std::size_t p = i * w + j;
        const double gy = i + 1 < h ? x[p + w] - x[p] : 0.0;
        const double gx = j + 1 < w ? x[p + 1] - x[p] : 0.0;
        const double den = 1.0 + tau * std::hypot(gx, gy);
        py[p] = (py[p] + tau * gy) / den;
        px[p] = (px[p] + tau * gx) / den;
      }
  }
  div(dv);
  for (std::size_t p = 0; p < n; ++p) x[p] = u[p] - lambda * dv[p];
  return x;
}

}  // namespace

TEST_CASE("weighted lp") {
  const std::vector<double> x = {2.0, -0.3};
  CHECK(weighted_lp_prox(x, {}, 1, 0.5) == std::vector<double>{1.5, 0.0});
  CHECK(weighted_lp_prox(x, {}, 1, 0.0) == x);
  CHECK(weighted_lp_prox(x, {}, 2, 0.0) == x);
  const std::vector<double> small = {0.3, -0.4};
  for (double v : weighted_lp_prox(small, {}, 2, 0.5)) CHECK(v == 0.0);
  CHECK_THROWS_AS((void)weighted_lp_prox(x, {}, 3, 0.5), Unsupported);
  CHECK_THROWS_AS((void)weighted_lp_eval(x, {}, 3), Unsupported);
  CHECK(weighted_lp_eval(x, std::vector<double>{1.0, 2.0}, 1) == doctest::Approx(2.6));
  CHECK(weighted_lp_eval(x, std::vector<double>{1.0, 2.0}, 2) ==
        doctest::Approx(std::sqrt(4.0 + 0.36)));
}

TEST_CASE("weighted l1 prox against 1-D minimisation") {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const double x = rng.uniform(-3, 3), w = rng.uniform(0.2, 2.0), tau = rng.uniform(0.1, 1.0);
    // Golden-section search on the strictly convex scalar objective.
    auto f = [&](double y) { return tau * w * std::abs(y) + 0.5 * (y - x) * (y - x); };
    double a = -4.0, b = 4.0;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int k = 0; k < 200; ++k) {
      const double c = b - g * (b - a), d = a + g * (b - a);
      (f(c) < f(d) ? b : a) = f(c) < f(d) ? d : c;
    }
    const auto p = weighted_lp_prox(std::vector<double>{x}, std::vector<double>{w}, 1, tau);
    CHECK(std::abs(p[0] - 0.5 * (a + b)) < 1e-7);
  }
}

TEST_CASE("nonuniform weighted l2 prox against a dual projected gradient") {
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const auto v = rng.normals(5);
    const auto w = rng.uniforms(5, 0.3, 2.0);
    const double tau = rng.uniform(0.2, 1.5);
    // x = v - tau w o u with u the minimiser of 0.5 ||v - tau w o u||^2 on the unit ball.
    std::vector<double> u(5, 0.0);
    double wmax = 0.0;
    for (double wi : w) wmax = std::max(wmax, wi);
    const double step = 1.0 / (tau * tau * wmax * wmax);
    for (int k = 0; k < 100000; ++k) {
      double nn = 0.0;
      for (std::size_t i = 0; i < 5; ++i) {
        u[i] += step * tau * w[i] * (v[i] - tau * w[i] * u[i]);
        nn += u[i] * u[i];
      }
      if (nn > 1.0)
        for (auto& ui : u) ui /= std::sqrt(nn);
    }
    const auto p = weighted_lp_prox(v, w, 2, tau);
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(p[i] - (v[i] - tau * w[i] * u[i])) < 1e-7);
  }
}

TEST_CASE("matrix weighted l1") {
  const std::vector<double> eye = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  const std::vector<double> x = {2.0, -0.3, 0.7};
  const auto p = matrix_weighted_l1_prox(x, eye, 0.5);
  CHECK(std::abs(p[0] - 1.5) < 1e-8);
  CHECK(std::abs(p[1]) < 1e-8);
  CHECK(std::abs(p[2] - 0.2) < 1e-8);
  CHECK(matrix_weighted_l1_eval(x, eye) == doctest::Approx(3.0));

  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto w = rng.normals(9);
    const auto r = rng.normals(3);
    const double step = rng.uniform(0.2, 1.0);
    const auto ours = matrix_weighted_l1_prox(r, w, step);
    const auto exact = oracles::l1_matrix_prox_enumerate(r, w, step, false);
    CHECK(oracles::l1_matrix_objective(ours, r, w, step) <= exact.objective + 1e-9);
  }
}

TEST_CASE("orthogonal W: prox is W^T soft(W r), which can leave the orthant") {
  Rng rng(5);
  std::size_t negative = 0;
  for (int t = 0; t < 50; ++t) {
    Eigen::Matrix3d m;
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = rng.normal();
    const Eigen::Matrix3d q = Eigen::HouseholderQR<Eigen::Matrix3d>(m).householderQ();
    std::vector<double> w(9);
    for (int i = 0; i < 9; ++i) w[static_cast<std::size_t>(i)] = q(i / 3, i % 3);
    const auto r = rng.uniforms(3, 0.0, 2.0);
    const double step = rng.uniform(0.1, 1.0);
    Eigen::Vector3d y = q * Eigen::Vector3d(r[0], r[1], r[2]);
    for (int i = 0; i < 3; ++i) y(i) = std::copysign(std::max(std::abs(y(i)) - step, 0.0), y(i));
    const Eigen::Vector3d closed = q.transpose() * y;
    const auto p = matrix_weighted_l1_prox(r, w, step);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(p[static_cast<std::size_t>(i)] - closed(i)) < 1e-9);
    negative += testutil::min_of(p) < -1e-8 ? 1 : 0;
  }
  CHECK(negative > 0);

  // Rotation by 60 degrees, r = (1, 0), step 0.6: W r = (0.5, -0.866) thresholds
  // to (0, -0.266), and W^T of that is (0.230, -0.133).
  const double c = 0.5, s = std::sqrt(3.0) / 2.0;
  const std::vector<double> rot = {c, s, -s, c};
  const auto p = matrix_weighted_l1_prox(std::vector<double>{1.0, 0.0}, rot, 0.6);
  CHECK(p[0] == doctest::Approx(s * (s - 0.6)).epsilon(1e-9));
  CHECK(p[1] == doctest::Approx(-c * (s - 0.6)).epsilon(1e-9));
}

TEST_CASE("tv evaluation") {
  const Shape s{1, 2, 2};
  CHECK(tv_eval(std::vector<double>(4, 3.0), s, TvVariant::iso2d) == 0.0);
  const std::vector<double> u = {0, 1, 0, 1};
  CHECK(tv_eval(u, s, TvVariant::aniso2d) == doctest::Approx(2.0));
  CHECK(tv_eval(u, s, TvVariant::iso2d) == doctest::Approx(2.0));
  const std::vector<double> diag = {0, 1, 1, 1};
  CHECK(tv_eval(diag, s, TvVariant::aniso2d) == doctest::Approx(2.0));
  CHECK(tv_eval(diag, s, TvVariant::iso2d) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS((void)tv_eval(u, Shape{1, 1, 3}, TvVariant::iso2d));
}

TEST_CASE("reverse triangle inequality for every tv variant") {
  Rng rng(6);
  const TvVariant all[] = {TvVariant::iso2d,    TvVariant::aniso2d,  TvVariant::iso3d,
                           TvVariant::aniso3d,  TvVariant::vectorial, TvVariant::spatio_temporal};
  for (TvVariant v : all) {
    const bool volume = v != TvVariant::iso2d && v != TvVariant::aniso2d;
    const Shape s{volume ? 3u : 1u, 5, 4};
    for (int t = 0; t < 100; ++t) {
      const auto x = rng.normals(s.size());
      std::vector<double> ax(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) ax[i] = std::abs(x[i]);
      CHECK(tv_eval(ax, s, v, 10.0) <= tv_eval(x, s, v, 10.0) + 1e-12);
    }
  }
}

TEST_CASE("tv prox") {
  SUBCASE("constant image is a fixed point") {
    const std::vector<double> c(16, 0.7);
    const auto p = tv_prox(c, {1, 4, 4}, 0.5, TvVariant::iso2d);
    CHECK(testutil::max_abs_diff(p, c) < 1e-12);
  }
  SUBCASE("two-point closed form") {
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
      const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2), wt = rng.uniform(0.05, 1.0);
      const double m = 0.5 * (a + b), d = b - a;
      const double dd = std::copysign(std::max(std::abs(d) - 2.0 * wt, 0.0), d);
      TvOptions o;
      o.inner_iters = 3000;
      const auto p = tv_prox(std::vector<double>{a, b}, {1, 1, 2}, wt, TvVariant::aniso2d, o);
      CHECK(std::abs(p[0] - (m - 0.5 * dd)) < 1e-6);
      CHECK(std::abs(p[1] - (m + 0.5 * dd)) < 1e-6);
    }
  }
  SUBCASE("anisotropic 2x3 against the enumeration oracle") {
    Rng rng(8);
    const auto d = rows_of(dense_gradient(2, 3));
    for (int t = 0; t < 10; ++t) {
      const auto u = rng.normals(6);
      TvOptions o;
      o.inner_iters = 5000;
      o.gap_tol = 1e-12;
      const auto p = tv_prox(u, {1, 2, 3}, 0.4, TvVariant::aniso2d, o);
      const auto exact = oracles::l1_matrix_prox_enumerate(u, d, 0.4, false);
      CHECK(std::abs(tv_objective(p, u, {1, 2, 3}, TvVariant::aniso2d, 0.4) - exact.objective) < 1e-8);
      CHECK(testutil::max_abs_diff(p, exact.x) < 1e-4);
    }
  }
  SUBCASE("isotropic 4x4 against Chambolle's projection") {
    Rng rng(9);
    for (int t = 0; t < 5; ++t) {
      const auto u = rng.normals(16);
      TvOptions o;
      o.inner_iters = 3000;
      TvProxInfo info;
      const auto p = tv_prox(u, {1, 4, 4}, 0.3, TvVariant::iso2d, o, &info);
      const auto q = chambolle_iso(u, 4, 4, 0.3, 50000);
      const double fp = tv_objective(p, u, {1, 4, 4}, TvVariant::iso2d, 0.3);
      const double fq = tv_objective(q, u, {1, 4, 4}, TvVariant::iso2d, 0.3);
      CHECK(std::abs(fp - fq) < 1e-5);
      for (std::size_t k = 1; k < info.dual_objective.size(); ++k) {
        CHECK(info.dual_objective[k] <= info.dual_objective[k - 1] + 1e-12);
      }
      CHECK(info.duality_gap < 1e-6);
    }
  }
}

TEST_CASE("generalised Tikhonov") {
  const Shape s{1, 8, 8};
  const GradientOperator d(s, {{Axis::row, 1.0}, {Axis::col, 1.0}});
  Rng rng(10);
  const auto r = rng.uniforms(64, 0.0, 2.0);
  CHECK(testutil::max_abs_diff(gen_tikhonov_prox(r, 0.0, d), r) == 0.0);
  const std::vector<double> c(64, 1.3);
  CHECK(testutil::max_abs_diff(gen_tikhonov_prox(c, 2.0, d), c) < 1e-12);

  const auto x = gen_tikhonov_prox(r, 1.0, d);
  const Eigen::MatrixXd dd = dense_gradient(8, 8);
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(64, 64) + dd.transpose() * dd;
  const Eigen::VectorXd rv = Eigen::Map<const Eigen::VectorXd>(r.data(), 64);
  const Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x.data(), 64);
  CHECK((a * xv - rv).norm() / rv.norm() < 1e-8);
  const Eigen::VectorXd direct = a.ldlt().solve(rv);
  CHECK((direct - xv).cwiseAbs().maxCoeff() < 1e-7);

  CgOptions tight;
  tight.max_iters = 1;
  tight.tol = 1e-14;
  CHECK_THROWS_AS((void)gen_tikhonov_prox(r, 1.0, d, tight), ConvergenceError);

  const GenTikhonov g(s, {{Axis::row, 1.0}, {Axis::col, 1.0}}, 0.5);
  Eigen::VectorXd grad = dd * rv;
  CHECK(g.eval(r) == doctest::Approx(0.25 * grad.squaredNorm()));
}

TEST_CASE("multi-bang") {
  const MultiBangLevels two({0.0, 1.0});
  CHECK(multibang_prox_scalar(0.2, two, 0.25) == 0.0);
  CHECK(multibang_prox_scalar(0.5, two, 0.25) == doctest::Approx(0.5));
  CHECK(multibang_prox_scalar(0.8, two, 0.25) == 1.0);
  CHECK(multibang_prox_scalar(-3.0, two, 0.25) == 0.0);
  CHECK(multibang_prox_scalar(5.0, two, 0.25) == 1.0);
  const MultiBangLevels three({0.0, 0.5, 1.0});
  for (double a : three.values()) CHECK(multibang_prox_scalar(a, three, 0.3) == a);
  CHECK_THROWS_AS((void)multibang_prox_scalar(0.5, two, 0.5), InvalidInput);
  CHECK_THROWS_AS((void)multibang_prox_scalar(0.5, two, 0.0), InvalidInput);
  CHECK_THROWS_AS(MultiBangLevels({1.0, 0.5}), InvalidInput);
  CHECK_THROWS_AS(MultiBangLevels({0.5, 0.5}), InvalidInput);

  Rng rng(11);
  const auto x = rng.uniforms(200, 0.0, 2.0);
  CHECK(testutil::min_of(multibang_prox(x, three, 0.2)) >= 0.0);
  // Continuity across every branch boundary.
  for (double v = -0.5; v < 1.5; v += 1e-3) {
    CHECK(std::abs(multibang_prox_scalar(v + 1e-7, three, 0.3) -
                   multibang_prox_scalar(v, three, 0.3)) < 1e-6);
  }
  CHECK(multibang_eval(std::vector<double>{0.25}, two) == doctest::Approx(0.1875));
  CHECK(multibang_eval(std::vector<double>{1.5}, two) == kInfinity);
}

TEST_CASE("box indicator") {
  const std::vector<double> lo = {0.0, 0.0}, hi = {2.0, 2.0};
  const std::vector<double> in = {0.5, 1.5};
  CHECK(indicator_box_prox(in, lo, hi) == in);
  CHECK(indicator_box_prox(std::vector<double>{-1.0, 5.0}, lo, hi) == std::vector<double>{0.0, 2.0});
  Rng rng(12);
  const auto x = rng.normals(2);
  const auto p = indicator_box_prox(x, lo, hi);
  CHECK(indicator_box_prox(p, lo, hi) == p);
  CHECK(indicator_set_eval(in, lo, hi) == 0.0);
  CHECK(indicator_set_eval(std::vector<double>{-1.0, 0.0}, lo, hi) == kInfinity);
}

TEST_CASE("gradient operators") {
  const GradientOperator d1({1, 1, 3}, {{Axis::col, 1.0}});
  std::vector<double> y(3);
  d1.apply(std::vector<double>{0.0, 1.0, 1.0}, y);
  CHECK(y == std::vector<double>{1.0, 0.0, 0.0});

  const Shape s{3, 4, 5};
  const GradientOperator d(s, {{Axis::channel, 10.0}, {Axis::row, 1.0}, {Axis::col, 1.0}});
  std::vector<double> out(d.range().size());
  d.apply(std::vector<double>(s.size(), 2.5), out);
  for (double v : out) CHECK(v == 0.0);
  CHECK(adjoint_check(d, 10, 1e-10, 1).pass);
  CHECK(d.norm_estimate() * d.norm_estimate() <= d.norm_squared_bound() * (1 + 1e-9));

  const SymGradientOperator e({1, 4, 5});
  CHECK(adjoint_check(e, 10, 1e-10, 2).pass);
  const auto ed = testutil::dense_of(e);
  const auto eh = testutil::dense_adjoint_of(e);
  CHECK((ed.adjoint() - eh).norm() < 1e-13);

  // Gradient of an affine ramp is constant on its support and E kills it.
  const GradientOperator d2({1, 4, 5}, {{Axis::row, 1.0}, {Axis::col, 1.0}});
  std::vector<double> ramp(20), g(40), sym(80);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 5; ++j) ramp[i * 5 + j] = 2.0 * i - 0.5 * j;
  d2.apply(ramp, g);
  e.apply(g, sym);
  for (double v : sym) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("tgv2") {
  const Shape s{1, 16, 16};
  SUBCASE("constant and ramp are fixed points") {
    std::vector<double> c(256, 0.4), ramp(256);
    for (std::size_t i = 0; i < 16; ++i)
      for (std::size_t j = 0; j < 16; ++j) ramp[i * 16 + j] = static_cast<double>(i);
    CHECK(testutil::max_abs_diff(tgv2_prox(c, s, 0.5, 1.0, 1.0), c) < 1e-4);
    CHECK(testutil::max_abs_diff(tgv2_prox(ramp, s, 0.5, 1.0, 1.0), ramp) < 1e-4);
    CHECK(tgv2_eval(ramp, s, 0.5, 1.0) < 1e-6);
  }
  SUBCASE("1-D evaluation against the exact dynamic program") {
    Rng rng(13);
    TgvOptions o;
    o.inner_iters = 20000;
    for (int t = 0; t < 5; ++t) {
      const auto u = rng.normals(7);
      const double a = rng.uniform(0.3, 1.5), b = rng.uniform(0.3, 1.5);
      CHECK(std::abs(tgv2_eval(u, {1, 1, 7}, a, b, o) - oracles::tgv1d_exact(u, a, b)) < 1e-4);
    }
  }
  SUBCASE("8-sample hat against the primal-dual certificate") {
    const std::vector<double> hat = {0, 0.5, 1.0, 1.5, 1.5, 1.0, 0.5, 0};
    TgvOptions o;
    o.inner_iters = 20000;
    const auto ours = tgv2_prox(hat, {1, 1, 8}, 0.3, 0.6, 1.0, o);
    const auto cert = oracles::tgv1d_bounded_prox(hat, 0.3, 0.6, false);
    CHECK(cert.objective - cert.lower_bound < 1e-6);
    CHECK(oracles::tgv1d_prox_objective(ours, hat, 0.3, 0.6) <= cert.lower_bound + 1e-4);
  }
  SUBCASE("spike leaves the orthant and the lift falls back") {
    const std::vector<double> r = {2, 0, 0, 0, 0, 0};
    TgvOptions o;
    o.inner_iters = 4000;
    const Tgv2 h({1, 1, 6}, 0.5, 1.0, 1.0, o);
    CHECK(testutil::min_of(h.prox(r, 1.0)) < -0.1);
    MagLiftReport rep;
    const auto x = bounded_prox(h, r, 1.0, {}, &rep);
    CHECK(rep.entered_fallback);
    CHECK(testutil::min_of(x) >= 0.0);
    const auto cert = oracles::tgv1d_bounded_prox(r, 0.5, 1.0, true);
    CHECK(oracles::tgv1d_prox_objective(x, r, 0.5, 1.0) <= cert.lower_bound + 1e-5);
  }
}

TEST_CASE("nonnegative inputs stay nonnegative") {
  Rng rng(14);
  const Shape s{1, 6, 6};
  const TotalVariation tv(s, TvVariant::iso2d, 0.4);
  const GenTikhonov gt(s, {{Axis::row, 1.0}, {Axis::col, 1.0}}, 0.8);
  const MultiBang mb(s, MultiBangLevels({0.0, 0.5, 1.0}), 1.0);
  const BoxIndicator box(s, 0.1, 0.9);
  for (const ProxFunction* h : std::initializer_list<const ProxFunction*>{&tv, &gt, &mb, &box}) {
    for (int t = 0; t < 20; ++t) {
      const auto r = rng.uniforms(s.size(), 0.0, 2.0);
      CHECK(testutil::min_of(h->prox(r, 0.3)) >= 0.0);
    }
  }
}

TEST_CASE("registry") {
  const Shape s{1, 3, 3};
  nlohmann::json matrix = nlohmann::json::array();
  for (int i = 0; i < 9; ++i) {
    std::vector<double> row(9, 0.0);
    row[static_cast<std::size_t>(i)] = 1.0;
    matrix.push_back(row);
  }
  for (const auto& name : regularizer_names()) {
    nlohmann::json params = nlohmann::json::object();
    if (name == "wl1-matrix") params["matrix"] = matrix;
    if (name == "multibang") params["levels"] = {0.0, 1.0};
    const auto h = make_regularizer(name, s, 0.1, params);
    REQUIRE(h);
    CHECK(h->size() == 9);
  }
  CHECK_THROWS_AS((void)make_regularizer("nope", s, 0.1), InvalidInput);
  CHECK_THROWS_AS((void)make_regularizer("tv-iso", s, 0.1, {{"bogus", 1}}), InvalidInput);
  CHECK_THROWS_AS((void)make_regularizer("l1", s, -1.0), InvalidInput);
  CHECK(make_regularizer("vtv", {3, 3, 3}, 0.1)->name() == "tv-vectorial");
}
