#include "proxmag/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace proxmag {

std::string to_string(const Shape& s) {
  return "(" + std::to_string(s.channels) + ", " + std::to_string(s.height) + ", " +
         std::to_string(s.width) + ")";
}

ComplexImage::ComplexImage(Shape shape) : shape_(shape), data_(shape.size()) {}

ComplexImage::ComplexImage(Shape shape, std::vector<cplx> data)
    : shape_(shape), data_(std::move(data)) {
  if (shape_.channels == 0) throw InvalidInput("ComplexImage: channel count must be >= 1");
  if (data_.size() != shape_.size()) {
    throw InvalidInput("ComplexImage: data length " + std::to_string(data_.size()) +
                       " does not match shape " + to_string(shape_));
  }
  if (!all_finite(data_)) throw InvalidInput("ComplexImage: non-finite sample");
}

cplx unit_phase(cplx z) {
  const double r = std::abs(z);
  if (r == 0.0) return {1.0, 0.0};
  return z / r;
}

MagPhase decompose(std::span<const cplx> z, Shape shape) {
  if (z.size() != shape.size()) throw InvalidInput("decompose: size/shape mismatch");
  if (!all_finite(z)) throw InvalidInput("decompose: non-finite input");
  MagPhase out{shape, std::vector<double>(z.size()), std::vector<cplx>(z.size())};
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double r = std::abs(z[i]);
    out.magnitude[i] = r;
    out.phase[i] = r == 0.0 ? cplx{1.0, 0.0} : z[i] / r;
  }
  return out;
}

MagPhase decompose(const ComplexImage& z) { return decompose(z.data(), z.shape()); }

ComplexImage recompose(const MagPhase& m) {
  if (m.magnitude.size() != m.shape.size() || m.phase.size() != m.shape.size()) {
    throw InvalidInput("recompose: magnitude/phase length does not match shape");
  }
  std::vector<cplx> z(m.shape.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = m.magnitude[i] * m.phase[i];
  return ComplexImage(m.shape, std::move(z));
}

bool all_finite(std::span<const cplx> v) {
  return std::all_of(v.begin(), v.end(), [](cplx c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (const cplx& c : v) s += std::norm(c);
  return std::sqrt(s);
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace proxmag
