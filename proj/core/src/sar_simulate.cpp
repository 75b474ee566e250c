#include <cmath>
#include <numbers>
#include <random>

#include "proxmag/sar.hpp"

namespace proxmag {

Phantom default_phantom(const SceneGrid& grid) {
  const double w = static_cast<double>(grid.width) * grid.spacing;
  const double h = static_cast<double>(grid.height) * grid.spacing;
  const double cx = grid.origin_x + 0.5 * static_cast<double>(grid.width - 1) * grid.spacing;
  const double cy = grid.origin_y + 0.5 * static_cast<double>(grid.height - 1) * grid.spacing;
  Phantom p;
  p.background = 0.1;
  p.shapes.push_back({PhantomShape::Kind::rectangle, cx - 0.22 * w, cy - 0.18 * h, 0.14 * w,
                      0.2 * h, 1.0});
  p.shapes.push_back({PhantomShape::Kind::rectangle, cx + 0.2 * w, cy + 0.22 * h, 0.18 * w,
                      0.08 * h, 0.6});
  p.shapes.push_back({PhantomShape::Kind::disk, cx + 0.18 * w, cy - 0.15 * h, 0.13 * w, 0.0, 0.8});
  return p;
}

std::vector<double> rasterize(const Phantom& p, const SceneGrid& grid) {
  std::vector<double> mag(grid.pixels(), p.background);
  for (const auto& s : p.shapes) {
    if (!(s.level >= 0.0)) throw InvalidInput("phantom: levels must be >= 0");
    for (std::size_t i = 0; i < grid.height; ++i) {
      for (std::size_t j = 0; j < grid.width; ++j) {
        const double dx = grid.x(j) - s.center_x, dy = grid.y(i) - s.center_y;
        const bool inside = s.kind == PhantomShape::Kind::rectangle
                                ? std::abs(dx) <= s.half_x && std::abs(dy) <= s.half_y
                                : dx * dx + dy * dy <= s.half_x * s.half_x;
        if (inside) mag[i * grid.width + j] = s.level;
      }
    }
  }
  return mag;
}

ComplexImage random_phase_image(std::span<const double> magnitude, Shape shape,
                                 std::uint64_t seed) {
  if (magnitude.size() != shape.size()) throw InvalidInput("random_phase_image: size mismatch");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::vector<cplx> v(shape.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(magnitude[i] >= 0.0)) throw InvalidInput("random_phase_image: magnitudes must be >= 0");
    v[i] = std::polar(magnitude[i], angle(rng));
  }
  return ComplexImage(shape, std::move(v));
}

ComplexImage add_noise(const ComplexImage& clean, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw InvalidInput("add_noise: sigma must be >= 0");
  std::vector<cplx> v(clean.data().begin(), clean.data().end());
  if (sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, sigma / std::sqrt(2.0));
    for (auto& z : v) {
      const double re = normal(rng);
      const double im = normal(rng);
      z += cplx{re, im};
    }
  }
  return ComplexImage(clean.shape(), std::move(v));
}

Simulation simulate(const LinearOperator& a, std::span<const double> magnitude,
                    const NoiseSpec& noise, std::uint64_t seed) {
  Simulation s;
  s.truth = random_phase_image(magnitude, a.domain(), seed);
  s.clean = ComplexImage(a.range(), a.apply(s.truth.data()));
  s.sigma = noise.sigma;
  if (noise.snr_db) {
    const double power = std::pow(norm2(s.clean.data()), 2) / static_cast<double>(s.clean.size());
    s.sigma = std::sqrt(power / std::pow(10.0, *noise.snr_db / 10.0));
  }
  s.data = add_noise(s.clean, s.sigma, seed ^ 0x9e3779b97f4a7c15ULL);
  return s;
}

}  // namespace proxmag
