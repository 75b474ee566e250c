#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "proxmag/parallel.hpp"
#include "proxmag/sar.hpp"

namespace proxmag {
namespace {

double distance(const Vec3& a, double x, double y) {
  const double dx = a[0] - x, dy = a[1] - y, dz = a[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double distance(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void check_grid(const SceneGrid& g) {
  if (g.height == 0 || g.width == 0 || !(g.spacing > 0.0)) {
    throw InvalidInput("SAR operator: grid needs positive extents and spacing");
  }
}

void check_sizes(std::size_t got_in, std::size_t want_in, std::size_t got_out,
                 std::size_t want_out) {
  if (got_in != want_in || got_out != want_out) throw InvalidInput("SAR operator: size mismatch");
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------

FrequencyDomainSarOperator::FrequencyDomainSarOperator(SarGeometry geometry, SceneGrid grid)
    : geometry_(std::move(geometry)), grid_(grid) {
  geometry_.validate();
  check_grid(grid_);
  d_omega_ = geometry_.uniform_spacing();
}

double FrequencyDomainSarOperator::delay(std::size_t j, std::size_t i) const {
  const double x = grid_.x(i % grid_.width), y = grid_.y(i / grid_.width);
  const auto& tx = geometry_.tx[j];
  const auto& rx = geometry_.rx[j];
  const double ref = distance(tx, geometry_.x_ref) + distance(rx, geometry_.x_ref);
  return (distance(tx, x, y) + distance(rx, x, y) - ref) / geometry_.c;
}

void FrequencyDomainSarOperator::phases(double tau, std::span<cplx> out) const {
  const auto& w = geometry_.omega;
  if (!d_omega_) {
    for (std::size_t k = 0; k < w.size(); ++k) out[k] = std::polar(1.0, w[k] * tau);
    return;
  }
  // Geometric recurrence, re-seeded every 32 samples.
  const cplx step = std::polar(1.0, *d_omega_ * tau);
  for (std::size_t k = 0; k < w.size(); ++k) {
    out[k] = k % 32 == 0 ? std::polar(1.0, (w.front() + static_cast<double>(k) * *d_omega_) * tau)
                         : out[k - 1] * step;
  }
}

void FrequencyDomainSarOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  const std::size_t npix = grid_.pixels(), n = geometry_.pulses(), m = geometry_.frequencies();
  check_sizes(x.size(), npix, y.size(), n * m);
  parallel_for(n, [&](std::size_t j0, std::size_t j1) {
    std::vector<cplx> ph(m), acc(m);
    for (std::size_t j = j0; j < j1; ++j) {
      std::fill(acc.begin(), acc.end(), cplx{});
      for (std::size_t i = 0; i < npix; ++i) {
        if (x[i] == cplx{}) continue;
        phases(delay(j, i), ph);
        for (std::size_t k = 0; k < m; ++k) acc[k] += x[i] * ph[k];
      }
      for (std::size_t k = 0; k < m; ++k) y[j * m + k] = geometry_.amplitude_at(k) * acc[k];
    }
  });
}

void FrequencyDomainSarOperator::adjoint(std::span<const cplx> y, std::span<cplx> x) const {
  const std::size_t npix = grid_.pixels(), n = geometry_.pulses(), m = geometry_.frequencies();
  check_sizes(y.size(), n * m, x.size(), npix);
  std::vector<cplx> weighted(n * m);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      weighted[j * m + k] = std::conj(geometry_.amplitude_at(k)) * y[j * m + k];
    }
  }
  parallel_for(npix, [&](std::size_t i0, std::size_t i1) {
    std::vector<cplx> ph(m);
    for (std::size_t i = i0; i < i1; ++i) {
      cplx acc{};
      for (std::size_t j = 0; j < n; ++j) {
        phases(delay(j, i), ph);
        const cplx* row = weighted.data() + j * m;
        for (std::size_t k = 0; k < m; ++k) acc += std::conj(ph[k]) * row[k];
      }
      x[i] = acc;
    }
  }, 16);
}

// ---------------------------------------------------------------------------

struct TimeDomainSarOperator::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

TimeDomainSarOperator::TimeDomainSarOperator(SarGeometry geometry, SceneGrid grid,
                                             std::size_t upsample)
    : geometry_(std::move(geometry)), grid_(grid), upsample_(upsample) {
  geometry_.validate();
  check_grid(grid_);
  if (upsample_ == 0 || (upsample_ & (upsample_ - 1)) != 0) {
    throw InvalidInput("TimeDomainSarOperator: upsample must be a power of two");
  }
  const auto d_omega = geometry_.uniform_spacing();
  if (!d_omega) throw InvalidInput("TimeDomainSarOperator: frequencies must be uniformly spaced");
  const std::size_t m = geometry_.frequencies();
  length_ = upsample_ * m;
  bin_width_ = 2.0 * std::numbers::pi / (*d_omega * static_cast<double>(length_));
  omega_center_ = geometry_.omega[m / 2];

  plans_ = std::make_unique<Plans>();
  std::vector<cplx> a(length_), b(length_);
  auto* pa = reinterpret_cast<fftw_complex*>(a.data());
  auto* pb = reinterpret_cast<fftw_complex*>(b.data());
  const int len = static_cast<int>(length_);
  std::lock_guard lock(fftw_planner_mutex());
  plans_->forward = fftw_plan_dft_1d(len, pa, pb, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->backward = fftw_plan_dft_1d(len, pa, pb, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plans_->forward || !plans_->backward) throw NumericalError("FFTW planning failed");
}

TimeDomainSarOperator::~TimeDomainSarOperator() {
  if (!plans_) return;
  std::lock_guard lock(fftw_planner_mutex());
  if (plans_->forward) fftw_destroy_plan(plans_->forward);
  if (plans_->backward) fftw_destroy_plan(plans_->backward);
}

void TimeDomainSarOperator::bin(std::size_t j, std::size_t i, std::size_t& b, cplx& carrier) const {
  const double x = grid_.x(i % grid_.width), y = grid_.y(i / grid_.width);
  const auto& tx = geometry_.tx[j];
  const auto& rx = geometry_.rx[j];
  const double ref = distance(tx, geometry_.x_ref) + distance(rx, geometry_.x_ref);
  const double tau = (distance(tx, x, y) + distance(rx, x, y) - ref) / geometry_.c;
  const auto len = static_cast<long long>(length_);
  long long q = std::llround(tau / bin_width_) % len;
  if (q < 0) q += len;
  b = static_cast<std::size_t>(q);
  carrier = std::polar(1.0, omega_center_ * tau);
}

void TimeDomainSarOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  const std::size_t npix = grid_.pixels(), n = geometry_.pulses(), m = geometry_.frequencies();
  check_sizes(x.size(), npix, y.size(), n * m);
  const std::size_t half = m / 2;
  parallel_for(n, [&](std::size_t j0, std::size_t j1) {
    std::vector<cplx> profile(length_), spectrum(length_);
    for (std::size_t j = j0; j < j1; ++j) {
      std::fill(profile.begin(), profile.end(), cplx{});
      for (std::size_t i = 0; i < npix; ++i) {
        std::size_t b;
        cplx carrier;
        bin(j, i, b, carrier);
        profile[b] += carrier * x[i];
      }
      fftw_execute_dft(plans_->backward, reinterpret_cast<fftw_complex*>(profile.data()),
                       reinterpret_cast<fftw_complex*>(spectrum.data()));
      for (std::size_t k = 0; k < m; ++k) {
        const std::size_t kk = (k + length_ - half) % length_;
        y[j * m + k] = geometry_.amplitude_at(k) * spectrum[kk];
      }
    }
  });
}

void TimeDomainSarOperator::adjoint(std::span<const cplx> y, std::span<cplx> x) const {
  const std::size_t npix = grid_.pixels(), n = geometry_.pulses(), m = geometry_.frequencies();
  check_sizes(y.size(), n * m, x.size(), npix);
  const std::size_t half = m / 2;
  std::vector<cplx> profiles(n * length_);
  parallel_for(n, [&](std::size_t j0, std::size_t j1) {
    std::vector<cplx> spectrum(length_);
    for (std::size_t j = j0; j < j1; ++j) {
      std::fill(spectrum.begin(), spectrum.end(), cplx{});
      for (std::size_t k = 0; k < m; ++k) {
        spectrum[(k + length_ - half) % length_] = std::conj(geometry_.amplitude_at(k)) * y[j * m + k];
      }
      fftw_execute_dft(plans_->forward, reinterpret_cast<fftw_complex*>(spectrum.data()),
                       reinterpret_cast<fftw_complex*>(profiles.data() + j * length_));
    }
  });
  parallel_for(npix, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      cplx acc{};
      for (std::size_t j = 0; j < n; ++j) {
        std::size_t b;
        cplx carrier;
        bin(j, i, b, carrier);
        acc += std::conj(carrier) * profiles[j * length_ + b];
      }
      x[i] = acc;
    }
  }, 64);
}

// ---------------------------------------------------------------------------

MultiChannelOperator::MultiChannelOperator(std::vector<std::shared_ptr<const LinearOperator>> members)
    : members_(std::move(members)) {
  if (members_.empty()) throw InvalidInput("MultiChannelOperator: at least one member required");
  const Shape d0 = members_.front()->domain();
  const Shape r0 = members_.front()->range();
  bool same_range = true;
  std::size_t range_total = 0;
  for (const auto& op : members_) {
    if (!op) throw InvalidInput("MultiChannelOperator: null member");
    if (op->domain() != d0) throw InvalidInput("MultiChannelOperator: member domains must match");
    same_range = same_range && op->range() == r0;
    range_total += op->range().size();
  }
  const std::size_t c = members_.size();
  domain_ = {c * d0.channels, d0.height, d0.width};
  range_ = same_range ? Shape{c * r0.channels, r0.height, r0.width} : Shape{1, 1, range_total};
}

void MultiChannelOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  if (x.size() != domain_.size() || y.size() != range_.size()) {
    throw InvalidInput("MultiChannelOperator: size mismatch");
  }
  std::size_t xo = 0, yo = 0;
  for (const auto& op : members_) {
    const std::size_t dn = op->domain().size(), rn = op->range().size();
    op->apply(x.subspan(xo, dn), y.subspan(yo, rn));
    xo += dn;
    yo += rn;
  }
}

void MultiChannelOperator::adjoint(std::span<const cplx> y, std::span<cplx> x) const {
  if (x.size() != domain_.size() || y.size() != range_.size()) {
    throw InvalidInput("MultiChannelOperator: size mismatch");
  }
  std::size_t xo = 0, yo = 0;
  for (const auto& op : members_) {
    const std::size_t dn = op->domain().size(), rn = op->range().size();
    op->adjoint(y.subspan(yo, rn), x.subspan(xo, dn));
    xo += dn;
    yo += rn;
  }
}

double MultiChannelOperator::compute_norm_estimate() const {
  double best = 0.0;
  for (const auto& op : members_) best = std::max(best, op->norm_estimate());
  return best;
}

}  // namespace proxmag
