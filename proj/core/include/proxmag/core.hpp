#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "proxmag/error.hpp"

namespace proxmag {

using cplx = std::complex<double>;

/// Channel-major, row-major grid extents. Flattened index is
/// (c * height + i) * width + j.
struct Shape {
  std::size_t channels = 1;
  std::size_t height = 1;
  std::size_t width = 1;

  [[nodiscard]] std::size_t size() const { return channels * height * width; }
  [[nodiscard]] std::size_t plane() const { return height * width; }
  [[nodiscard]] std::size_t index(std::size_t c, std::size_t i, std::size_t j) const {
    return (c * height + i) * width + j;
  }
  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& s);

/// Complex reflectivity image of shape K x H x W. All samples are finite.
class ComplexImage {
 public:
  ComplexImage() = default;
  explicit ComplexImage(Shape shape);
  ComplexImage(Shape shape, std::vector<cplx> data);

  [[nodiscard]] const Shape& shape() const { return shape_; }
  [[nodiscard]] std::size_t size() const { return data_.size(); }
  [[nodiscard]] std::span<const cplx> data() const { return data_; }
  [[nodiscard]] const std::vector<cplx>& values() const { return data_; }

  [[nodiscard]] cplx at(std::size_t c, std::size_t i, std::size_t j) const {
    return data_[shape_.index(c, i, j)];
  }

  friend bool operator==(const ComplexImage&, const ComplexImage&) = default;

 private:
  Shape shape_{1, 0, 0};
  std::vector<cplx> data_;
};

/// Polar split z = r o Phi with r >= 0 and |Phi| = 1.
struct MagPhase {
  Shape shape;
  std::vector<double> magnitude;
  std::vector<cplx> phase;
};

/// Phase of a zero sample is defined as 1.
[[nodiscard]] cplx unit_phase(cplx z);

[[nodiscard]] MagPhase decompose(const ComplexImage& z);
[[nodiscard]] MagPhase decompose(std::span<const cplx> z, Shape shape);
[[nodiscard]] ComplexImage recompose(const MagPhase& m);

[[nodiscard]] bool all_finite(std::span<const cplx> v);
[[nodiscard]] bool all_finite(std::span<const double> v);

// Small vector helpers shared by the solvers. Inner products on complex
// vectors are Hermitian (conjugate-linear in the first argument).
[[nodiscard]] cplx dot(std::span<const cplx> a, std::span<const cplx> b);
[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);
[[nodiscard]] double norm2(std::span<const cplx> v);
[[nodiscard]] double norm2(std::span<const double> v);
[[nodiscard]] double norm_inf(std::span<const double> v);

}  // namespace proxmag
