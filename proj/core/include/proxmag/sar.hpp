#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "proxmag/core.hpp"
#include "proxmag/grid.hpp"
#include "proxmag/linear_operator.hpp"

namespace proxmag {

using Vec3 = std::array<double, 3>;

inline constexpr double kSpeedOfLight = 299792458.0;

/// Pulse positions, angular frequencies and scene reference for a
/// start-stop, single-scattering SAR collection.
struct SarGeometry {
  std::vector<Vec3> tx;
  std::vector<Vec3> rx;
  std::vector<double> omega;  // rad/s
  Vec3 x_ref{0.0, 0.0, 0.0};
  double c = kSpeedOfLight;
  /// a(omega_k); empty means 1.
  std::vector<cplx> amplitude;

  [[nodiscard]] std::size_t pulses() const { return tx.size(); }
  [[nodiscard]] std::size_t frequencies() const { return omega.size(); }
  [[nodiscard]] cplx amplitude_at(std::size_t k) const {
    return amplitude.empty() ? cplx{1.0, 0.0} : amplitude[k];
  }
  /// Phase-history shape: K = pulses, H = 1, W = frequencies.
  [[nodiscard]] Shape data_shape() const { return {pulses(), 1, frequencies()}; }
  /// Spacing if omega is uniformly spaced and increasing, else nullopt.
  [[nodiscard]] std::optional<double> uniform_spacing() const;
  void validate() const;

  /// Co-located transmitter and receiver.
  [[nodiscard]] static SarGeometry monostatic(std::vector<Vec3> positions,
                                              std::vector<double> omega, Vec3 x_ref = {0, 0, 0},
                                              double c = kSpeedOfLight);
};

void to_json(nlohmann::json& j, const SarGeometry& g);
void from_json(const nlohmann::json& j, SarGeometry& g);
void to_json(nlohmann::json& j, const SceneGrid& g);
void from_json(const nlohmann::json& j, SceneGrid& g);

struct CollectionOptions {
  std::size_t pulses = 32;
  std::size_t frequencies = 64;
  double center_frequency = 9.6e9;  // Hz
  double bandwidth = 500e6;         // Hz
  double standoff = 1000.0;         // slant range to x_ref, meters
  double elevation_deg = 30.0;
  /// Total aperture angle seen from x_ref.
  double aperture_deg = 3.0;
  /// Look azimuth of the aperture center, measured from +x.
  double azimuth_deg = -90.0;
  Vec3 x_ref{0.0, 0.0, 0.0};
};

/// Uniform angular frequencies for a band centered on center_frequency.
[[nodiscard]] std::vector<double> band_frequencies(double center_frequency, double bandwidth,
                                                   std::size_t count);

/// Straight flight line perpendicular to the look direction at constant
/// height, spanning aperture_deg as seen from x_ref.
[[nodiscard]] SarGeometry linear_collection(const CollectionOptions& o);

/// Circular arc of aperture_deg at constant elevation around x_ref.
[[nodiscard]] SarGeometry circular_collection(const CollectionOptions& o);

/// d(j, k) = a_k sum_i v_i exp(i omega_k [R_T + R_R - R_T,ref - R_R,ref] / c)
/// over the pixels of a single-channel grid. Parallel over pulses in apply and
/// over pixels in adjoint; results do not depend on the thread count.
class FrequencyDomainSarOperator final : public LinearOperator {
 public:
  FrequencyDomainSarOperator(SarGeometry geometry, SceneGrid grid);

  [[nodiscard]] Shape domain() const override { return {1, grid_.height, grid_.width}; }
  [[nodiscard]] Shape range() const override { return geometry_.data_shape(); }
  void apply(std::span<const cplx> x, std::span<cplx> y) const override;
  void adjoint(std::span<const cplx> y, std::span<cplx> x) const override;
  using LinearOperator::adjoint;
  using LinearOperator::apply;

  [[nodiscard]] const SarGeometry& geometry() const { return geometry_; }
  [[nodiscard]] const SceneGrid& grid() const { return grid_; }

 private:
  // Differential delay (seconds) of pixel i for pulse j.
  [[nodiscard]] double delay(std::size_t j, std::size_t i) const;
  void phases(double tau, std::span<cplx> out) const;

  SarGeometry geometry_;
  SceneGrid grid_;
  std::optional<double> d_omega_;
};

/// Fast time-domain pair: per pulse, scatterers are binned by nearest delay into
/// an upsampled profile of L = upsample * m bins of width 2 pi / (d_omega L),
/// carrying the exact phase at the band's center frequency omega_{m/2}; one
/// inverse FFT per pulse yields the m frequency samples. backproject is the
/// exact adjoint of this discretised forward model. Needs uniform frequencies.
class TimeDomainSarOperator final : public LinearOperator {
 public:
  TimeDomainSarOperator(SarGeometry geometry, SceneGrid grid, std::size_t upsample = 64);
  ~TimeDomainSarOperator() override;

  [[nodiscard]] Shape domain() const override { return {1, grid_.height, grid_.width}; }
  [[nodiscard]] Shape range() const override { return geometry_.data_shape(); }
  void apply(std::span<const cplx> x, std::span<cplx> y) const override;
  void adjoint(std::span<const cplx> y, std::span<cplx> x) const override;
  using LinearOperator::adjoint;
  using LinearOperator::apply;

  [[nodiscard]] std::size_t upsample() const { return upsample_; }
  [[nodiscard]] std::size_t profile_length() const { return length_; }
  [[nodiscard]] double bin_width() const { return bin_width_; }

 private:
  struct Plans;
  void bin(std::size_t j, std::size_t i, std::size_t& bin, cplx& carrier) const;

  SarGeometry geometry_;
  SceneGrid grid_;
  std::size_t upsample_;
  std::size_t length_;
  double bin_width_;
  double omega_center_;
  std::unique_ptr<Plans> plans_;
};

/// Block-diagonal stack of operators acting on consecutive channel blocks.
class MultiChannelOperator final : public LinearOperator {
 public:
  explicit MultiChannelOperator(std::vector<std::shared_ptr<const LinearOperator>> members);

  [[nodiscard]] Shape domain() const override { return domain_; }
  [[nodiscard]] Shape range() const override { return range_; }
  void apply(std::span<const cplx> x, std::span<cplx> y) const override;
  void adjoint(std::span<const cplx> y, std::span<cplx> x) const override;
  using LinearOperator::adjoint;
  using LinearOperator::apply;

  [[nodiscard]] std::size_t channels() const { return members_.size(); }
  [[nodiscard]] const LinearOperator& member(std::size_t c) const { return *members_[c]; }

 protected:
  /// Maximum of the member estimates.
  [[nodiscard]] double compute_norm_estimate() const override;

 private:
  std::vector<std::shared_ptr<const LinearOperator>> members_;
  Shape domain_;
  Shape range_;
};

// ---------------------------------------------------------------------------
// Synthetic scenes

struct PhantomShape {
  enum class Kind { rectangle, disk };
  Kind kind = Kind::rectangle;
  /// Center and size in meters relative to the grid's coordinates. For disks
  /// half_x is the radius.
  double center_x = 0.0;
  double center_y = 0.0;
  double half_x = 1.0;
  double half_y = 1.0;
  double level = 1.0;
};

struct Phantom {
  double background = 0.0;
  /// Later shapes overwrite earlier ones.
  std::vector<PhantomShape> shapes;
};

/// Default piecewise-constant scene: two rectangles and a disk on a dim background.
[[nodiscard]] Phantom default_phantom(const SceneGrid& grid);

/// Magnitude image of the phantom on the grid.
[[nodiscard]] std::vector<double> rasterize(const Phantom& p, const SceneGrid& grid);

struct NoiseSpec {
  /// Complex Gaussian noise, E|n|^2 = sigma^2.
  double sigma = 0.0;
  /// If set, overrides sigma: sigma^2 = mean |A v|^2 / 10^(snr_db / 10).
  std::optional<double> snr_db;
};

struct Simulation {
  ComplexImage truth;
  ComplexImage clean;
  ComplexImage data;
  double sigma = 0.0;
};

/// Uniform random phase in [-pi, pi) per pixel, deterministic given seed.
[[nodiscard]] ComplexImage random_phase_image(std::span<const double> magnitude, Shape shape,
                                              std::uint64_t seed);

/// truth = magnitude o random phase; data = A truth + noise.
[[nodiscard]] Simulation simulate(const LinearOperator& a, std::span<const double> magnitude,
                                  const NoiseSpec& noise, std::uint64_t seed);

/// Adds complex Gaussian noise of the given sigma.
[[nodiscard]] ComplexImage add_noise(const ComplexImage& clean, double sigma, std::uint64_t seed);

}  // namespace proxmag
