#include "proxmag/gradient.hpp"

#include <algorithm>
#include <cmath>

namespace proxmag {
namespace {

struct AxisGeometry {
  std::size_t length;
  std::size_t stride;
};

AxisGeometry geometry(const Shape& s, Axis a) {
  switch (a) {
    case Axis::channel:
      return {s.channels, s.height * s.width};
    case Axis::row:
      return {s.height, s.width};
    case Axis::col:
      return {s.width, 1};
  }
  return {1, 1};
}

template <typename T>
void grad_apply(const Shape& s, const std::vector<ScaledAxis>& axes, std::span<const T> u,
                std::span<T> out) {
  const std::size_t n = s.size();
  for (std::size_t a = 0; a < axes.size(); ++a) {
    const auto [len, stride] = geometry(s, axes[a].axis);
    const double w = axes[a].weight;
    T* block = out.data() + a * n;
    for (std::size_t idx = 0; idx < n; ++idx) {
      const std::size_t p = (idx / stride) % len;
      block[idx] = p + 1 < len ? w * (u[idx + stride] - u[idx]) : T{};
    }
  }
}

template <typename T>
void grad_adjoint(const Shape& s, const std::vector<ScaledAxis>& axes, std::span<const T> g,
                  std::span<T> out) {
  const std::size_t n = s.size();
  std::fill(out.begin(), out.end(), T{});
  for (std::size_t a = 0; a < axes.size(); ++a) {
    const auto [len, stride] = geometry(s, axes[a].axis);
    const double w = axes[a].weight;
    const T* block = g.data() + a * n;
    for (std::size_t idx = 0; idx < n; ++idx) {
      const std::size_t p = (idx / stride) % len;
      T acc{};
      if (p > 0) acc += block[idx - stride];
      if (p + 1 < len) acc -= block[idx];
      out[idx] += w * acc;
    }
  }
}

template <typename T>
void symgrad_apply(const Shape& s, std::span<const T> w, std::span<T> e) {
  const std::size_t H = s.height, W = s.width, K = s.channels, P = H * W, KP = K * P;
  std::fill(e.begin(), e.end(), T{});
  for (std::size_t c = 0; c < K; ++c) {
    const T* w0 = w.data() + c * P;
    const T* w1 = w.data() + KP + c * P;
    T* err = e.data() + c * P;
    T* erc = e.data() + KP + c * P;
    T* ecr = e.data() + 2 * KP + c * P;
    T* ecc = e.data() + 3 * KP + c * P;
    for (std::size_t i = 0; i < H; ++i) {
      for (std::size_t j = 0; j < W; ++j) {
        const std::size_t k = i * W + j;
        if (i + 2 < H) err[k] = w0[k + W] - w0[k];
        if (j + 2 < W) ecc[k] = w1[k + 1] - w1[k];
        if (i + 1 < H && j + 1 < W) {
          const T off = 0.5 * ((w0[k + 1] - w0[k]) + (w1[k + W] - w1[k]));
          erc[k] = off;
          ecr[k] = off;
        }
      }
    }
  }
}

template <typename T>
void symgrad_adjoint(const Shape& s, std::span<const T> e, std::span<T> w) {
  const std::size_t H = s.height, W = s.width, K = s.channels, P = H * W, KP = K * P;
  std::fill(w.begin(), w.end(), T{});
  for (std::size_t c = 0; c < K; ++c) {
    T* w0 = w.data() + c * P;
    T* w1 = w.data() + KP + c * P;
    const T* err = e.data() + c * P;
    const T* erc = e.data() + KP + c * P;
    const T* ecr = e.data() + 2 * KP + c * P;
    const T* ecc = e.data() + 3 * KP + c * P;
    for (std::size_t i = 0; i < H; ++i) {
      for (std::size_t j = 0; j < W; ++j) {
        const std::size_t k = i * W + j;
        if (i + 2 < H) {
          w0[k + W] += err[k];
          w0[k] -= err[k];
        }
        if (j + 2 < W) {
          w1[k + 1] += ecc[k];
          w1[k] -= ecc[k];
        }
        if (i + 1 < H && j + 1 < W) {
          const T off = 0.5 * (erc[k] + ecr[k]);
          w0[k + 1] += off;
          w0[k] -= off;
          w1[k + W] += off;
          w1[k] -= off;
        }
      }
    }
  }
}

}  // namespace

GradientOperator::GradientOperator(Shape shape, std::vector<ScaledAxis> axes)
    : shape_(shape), axes_(std::move(axes)) {
  if (axes_.empty()) throw InvalidInput("GradientOperator: at least one axis required");
  for (const auto& a : axes_) {
    if (!(a.weight > 0.0)) throw InvalidInput("GradientOperator: axis weights must be > 0");
  }
}

void GradientOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  grad_apply<cplx>(shape_, axes_, x, y);
}
void GradientOperator::adjoint(std::span<const cplx> y, std::span<cplx> x) const {
  grad_adjoint<cplx>(shape_, axes_, y, x);
}
void GradientOperator::apply(std::span<const double> x, std::span<double> y) const {
  grad_apply<double>(shape_, axes_, x, y);
}
void GradientOperator::adjoint(std::span<const double> y, std::span<double> x) const {
  grad_adjoint<double>(shape_, axes_, y, x);
}

double GradientOperator::norm_squared_bound() const {
  double b = 0.0;
  for (const auto& a : axes_) {
    if (geometry(shape_, a.axis).length > 1) b += 4.0 * a.weight * a.weight;
  }
  return b;
}

double GradientOperator::compute_norm_estimate() const { return std::sqrt(norm_squared_bound()); }

SymGradientOperator::SymGradientOperator(Shape image_shape) : shape_(image_shape) {}

void SymGradientOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  symgrad_apply<cplx>(shape_, x, y);
}
void SymGradientOperator::adjoint(std::span<const cplx> y, std::span<cplx> x) const {
  symgrad_adjoint<cplx>(shape_, y, x);
}
void SymGradientOperator::apply(std::span<const double> x, std::span<double> y) const {
  symgrad_apply<double>(shape_, x, y);
}
void SymGradientOperator::adjoint(std::span<const double> y, std::span<double> x) const {
  symgrad_adjoint<double>(shape_, y, x);
}

}  // namespace proxmag
