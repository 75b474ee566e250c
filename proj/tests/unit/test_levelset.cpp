#include <doctest.h>

#include <cstring>

#include "proxmag/levelset.hpp"
#include "test_util.hpp"

using namespace proxmag;
using testutil::Rng;

namespace {

LevelSetParams two_blobs() {
  LevelSetParams p;
  p.alpha = {2.0, 1.5};
  p.centers = {{{-0.4, -0.3}}, {{0.45, 0.35}}};
  p.beta = {{{0.6, 0.9}}, {{0.8, 0.5}}};
  p.gamma = {0.3, -0.5};
  p.c_high = 1.0;
  p.c_low = 0.1;
  p.width = 0.02;
  return p;
}

SceneGrid unit_grid(std::size_t n) { return SceneGrid::centered(n, n, 2.0 / static_cast<double>(n - 1)); }

// Independent scalar evaluation of the rendered image at one point.
double render_at(const LevelSetParams& p, double x, double y) {
  double phi = 0.0;
  for (std::size_t j = 0; j < p.alpha.size(); ++j) {
    const double dx = x - p.centers[j][0], dy = y - p.centers[j][1];
    const double c = std::cos(p.gamma[j]), s = std::sin(p.gamma[j]);
    const double u = std::exp(p.beta[j][0]) * (c * dx - s * dy);
    const double v = std::exp(p.beta[j][1]) * (s * dx + c * dy);
    const double rho = std::sqrt(u * u + v * v);
    const double psi = rho >= 1.0 ? 0.0 : std::pow(1.0 - rho, 4) * (4.0 * rho + 1.0);
    phi += psi / (1.0 + std::exp(-p.alpha[j]));
  }
  const double t = 1.0 / (1.0 + std::exp(-(phi - p.level) / p.width));
  return p.c_high * t + p.c_low * (1.0 - t);
}

}  // namespace

TEST_CASE("basis functions") {
  CHECK(wendland_c2(0.0) == 1.0);
  CHECK(wendland_c2(0.5) == doctest::Approx(0.1875));
  CHECK(wendland_c2(1.0) == 0.0);
  CHECK(wendland_c2(2.0) == 0.0);
  CHECK(logistic(0.0) == 0.5);
}

TEST_CASE("render examples") {
  const SceneGrid g = unit_grid(24);
  SUBCASE("equal contrasts give a constant image") {
    LevelSetParams p = two_blobs();
    p.c_high = 0.5;
    p.c_low = 0.5 - 1e-12;
    for (double v : palentir_render(p, g)) CHECK(std::abs(v - 0.5) <= 1e-12);
    p.c_low = 0.5;
    CHECK_THROWS_AS((void)palentir_render(p, g), InvalidInput);
  }
  SUBCASE("very negative weights give the low contrast") {
    LevelSetParams p = two_blobs();
    p.alpha = {-50.0, -50.0};
    p.width = LevelSetParams{}.width;
    for (double v : palentir_render(p, g)) CHECK(std::abs(v - p.c_low) < 1e-6);
  }
  SUBCASE("pointwise oracle") {
    const LevelSetParams p = two_blobs();
    const auto f = palentir_render(p, g);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.height; ++i)
      for (std::size_t j = 0; j < g.width; ++j)
        worst = std::max(worst, std::abs(f[i * g.width + j] - render_at(p, g.x(j), g.y(i))));
    CHECK(worst < 1e-12);
    for (double v : f) {
      CHECK(v >= p.c_low);
      CHECK(v <= p.c_high);
    }
  }
  SUBCASE("single large-weight center") {
    LevelSetParams p;
    p.alpha = {8.0};
    p.centers = {{{0.0, 0.0}}};
    p.beta = {{{0.0, 0.0}}};
    p.gamma = {0.0};
    p.c_low = 0.2;
    const auto f = palentir_render(p, SceneGrid::centered(31, 31, 0.2));
    CHECK(f[15 * 31 + 15] == doctest::Approx(p.c_high).epsilon(1e-6));
    CHECK(f[0] == doctest::Approx(p.c_low).epsilon(1e-6));
  }
}

TEST_CASE("parameter validation and json") {
  LevelSetParams p = two_blobs();
  p.c_low = 2.0;
  CHECK_THROWS_AS(p.validate(), InvalidInput);
  p = two_blobs();
  p.width = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidInput);
  p = two_blobs();
  p.gamma.pop_back();
  CHECK_THROWS_AS(p.validate(), InvalidInput);

  const LevelSetParams q = two_blobs();
  const LevelSetParams back = nlohmann::json(q).get<LevelSetParams>();
  CHECK(back.pack() == q.pack());
  CHECK(back.centers == q.centers);
  CHECK(back.width == q.width);
  LevelSetParams u = q;
  auto packed = q.pack();
  packed[0] = 9.0;
  u.unpack(packed);
  CHECK(u.alpha[0] == 9.0);
}

TEST_CASE("jacobian against central differences") {
  const SceneGrid g = unit_grid(20);
  Rng rng(3);
  for (int t = 0; t < 3; ++t) {
    LevelSetParams p = two_blobs();
    auto v = p.pack();
    for (auto& x : v) x += rng.uniform(-0.2, 0.2);
    p.unpack(v);
    p.width = 0.05;
    const auto jac = palentir_jacobian(p, g);
    const std::size_t cols = p.free_count();
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < cols; ++k) {
      const double h = 1e-6;
      LevelSetParams a = p, b = p;
      auto va = v, vb = v;
      va[k] += h;
      vb[k] -= h;
      a.unpack(va);
      b.unpack(vb);
      const auto fa = palentir_render(a, g), fb = palentir_render(b, g);
      for (std::size_t i = 0; i < g.pixels(); ++i) {
        const double fd = (fa[i] - fb[i]) / (2 * h);
        num = std::max(num, std::abs(fd - jac[i * cols + k]));
        den = std::max(den, std::abs(fd));
      }
    }
    CHECK(num / den < 1e-5);
  }
}

TEST_CASE("projection") {
  const SceneGrid g = SceneGrid::centered(48, 48, 2.0 / 47.0);
  const LevelSetParams truth = two_blobs();
  const auto r = palentir_render(truth, g);

  SUBCASE("fixed point") {
    const auto proj = levelset_project(r, g, truth);
    CHECK(proj.iterations == 0);
    CHECK(testutil::max_abs_diff(proj.image, r) < 1e-10);
  }
  SUBCASE("self recovery from a perturbed start") {
    LevelSetParams p0 = truth;
    auto v = p0.pack();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= (i % 2 ? 1.05 : 0.95);
    p0.unpack(v);
    const auto proj = levelset_project(r, g, p0);
    for (std::size_t k = 1; k < proj.objective.size(); ++k) {
      CHECK(proj.objective[k] <= proj.objective[k - 1]);
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      num += (proj.image[i] - r[i]) * (proj.image[i] - r[i]);
      den += r[i] * r[i];
    }
    CHECK(std::sqrt(num / den) < 1e-3);
  }
  CHECK_THROWS_AS((void)levelset_project(std::vector<double>(3, 0.0), g, truth), InvalidInput);
}

TEST_CASE("complex level-set prox") {
  const SceneGrid g = SceneGrid::centered(16, 16, 2.0 / 15.0);
  const LevelSetParams p0 = two_blobs();
  const auto mag = palentir_render(p0, g);
  Rng rng(5);
  std::vector<cplx> z(mag.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = mag[i] * rng.phase();
  const ComplexImage img({1, 16, 16}, z);

  const auto fixed = levelset_prox_complex(img, g, p0);
  CHECK(testutil::max_abs_diff(fixed.image.data(), img.data()) < 1e-8);

  std::vector<cplx> noisy(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) noisy[i] = (mag[i] + rng.uniform(0.0, 0.3)) * rng.phase();
  const ComplexImage nz({1, 16, 16}, noisy);
  const auto res = levelset_prox_complex(nz, g, p0);
  for (std::size_t i = 0; i < z.size(); ++i) {
    const cplx a = res.image.data()[i] / std::abs(res.image.data()[i]);
    CHECK(std::abs(a - unit_phase(noisy[i])) < 1e-15);
  }
  REQUIRE(!res.projection.objective.empty());
  CHECK(res.projection.objective.back() <= res.projection.objective.front());

  CHECK_THROWS_AS((void)levelset_prox_complex(ComplexImage({2, 16, 16}, std::vector<cplx>(512, 1.0)), g, p0),
                  InvalidInput);
}
