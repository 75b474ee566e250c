#include <cmath>
#include <numbers>

#include "proxmag/sar.hpp"

namespace proxmag {

std::optional<double> SarGeometry::uniform_spacing() const {
  if (omega.size() < 2) return std::nullopt;
  const double d = (omega.back() - omega.front()) / static_cast<double>(omega.size() - 1);
  if (!(d > 0.0)) return std::nullopt;
  for (std::size_t k = 0; k < omega.size(); ++k) {
    const double expect = omega.front() + static_cast<double>(k) * d;
    if (std::abs(omega[k] - expect) > 1e-9 * d) return std::nullopt;
  }
  return d;
}

void SarGeometry::validate() const {
  if (tx.empty() || omega.empty()) throw InvalidInput("SarGeometry: need at least one pulse and frequency");
  if (rx.size() != tx.size()) throw InvalidInput("SarGeometry: tx and rx must have equal length");
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidInput("SarGeometry: wave speed must be > 0");
  if (!amplitude.empty() && amplitude.size() != omega.size()) {
    throw InvalidInput("SarGeometry: amplitude must have one entry per frequency");
  }
  auto finite3 = [](const Vec3& v) {
    return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
  };
  for (std::size_t j = 0; j < tx.size(); ++j) {
    if (!finite3(tx[j]) || !finite3(rx[j])) throw InvalidInput("SarGeometry: non-finite position");
  }
  if (!finite3(x_ref)) throw InvalidInput("SarGeometry: non-finite reference point");
  for (double w : omega) {
    if (!std::isfinite(w)) throw InvalidInput("SarGeometry: non-finite frequency");
  }
}

SarGeometry SarGeometry::monostatic(std::vector<Vec3> positions, std::vector<double> omega,
                                    Vec3 x_ref, double c) {
  SarGeometry g;
  g.rx = positions;
  g.tx = std::move(positions);
  g.omega = std::move(omega);
  g.x_ref = x_ref;
  g.c = c;
  g.validate();
  return g;
}

void to_json(nlohmann::json& j, const SarGeometry& g) {
  j = nlohmann::json{{"tx", g.tx}, {"rx", g.rx}, {"omega", g.omega}, {"x_ref", g.x_ref}, {"c", g.c}};
  if (!g.amplitude.empty()) {
    nlohmann::json a = nlohmann::json::array();
    for (const cplx& v : g.amplitude) a.push_back({v.real(), v.imag()});
    j["amplitude"] = std::move(a);
  }
}

void from_json(const nlohmann::json& j, SarGeometry& g) {
  g.tx = j.at("tx").get<std::vector<Vec3>>();
  g.rx = j.contains("rx") ? j.at("rx").get<std::vector<Vec3>>() : g.tx;
  g.omega = j.at("omega").get<std::vector<double>>();
  g.x_ref = j.value("x_ref", Vec3{0.0, 0.0, 0.0});
  g.c = j.value("c", kSpeedOfLight);
  g.amplitude.clear();
  if (j.contains("amplitude")) {
    for (const auto& a : j.at("amplitude")) {
      const auto pair = a.get<std::array<double, 2>>();
      g.amplitude.emplace_back(pair[0], pair[1]);
    }
  }
  g.validate();
}

void to_json(nlohmann::json& j, const SceneGrid& g) {
  j = nlohmann::json{{"height", g.height},     {"width", g.width},      {"spacing", g.spacing},
                     {"origin_x", g.origin_x}, {"origin_y", g.origin_y}};
}

void from_json(const nlohmann::json& j, SceneGrid& g) {
  g.height = j.at("height").get<std::size_t>();
  g.width = j.at("width").get<std::size_t>();
  g.spacing = j.at("spacing").get<double>();
  g.origin_x = j.value("origin_x", 0.0);
  g.origin_y = j.value("origin_y", 0.0);
  if (g.height == 0 || g.width == 0 || !(g.spacing > 0.0)) {
    throw InvalidInput("SceneGrid: need positive extents and spacing");
  }
}

std::vector<double> band_frequencies(double center_frequency, double bandwidth,
                                     std::size_t count) {
  if (count == 0 || !(center_frequency > 0.0) || !(bandwidth > 0.0)) {
    throw InvalidInput("band_frequencies: need count >= 1 and positive frequencies");
  }
  const double df = bandwidth / static_cast<double>(count);
  std::vector<double> w(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double f = center_frequency +
                     (static_cast<double>(k) - static_cast<double>(count / 2)) * df;
    w[k] = 2.0 * std::numbers::pi * f;
  }
  return w;
}

namespace {

void check(const CollectionOptions& o) {
  if (o.pulses == 0 || o.frequencies == 0) throw InvalidInput("collection: need pulses and frequencies");
  if (!(o.standoff > 0.0)) throw InvalidInput("collection: standoff must be > 0");
  if (!(o.aperture_deg >= 0.0) || o.aperture_deg >= 180.0) {
    throw InvalidInput("collection: aperture must lie in [0, 180) degrees");
  }
}

double fraction(std::size_t j, std::size_t n) {
  return n > 1 ? static_cast<double>(j) / static_cast<double>(n - 1) - 0.5 : 0.0;
}

}  // namespace

SarGeometry linear_collection(const CollectionOptions& o) {
  check(o);
  const double deg = std::numbers::pi / 180.0;
  const double el = o.elevation_deg * deg, az = o.azimuth_deg * deg;
  const double ground = o.standoff * std::cos(el);
  const Vec3 center{o.x_ref[0] + ground * std::cos(az), o.x_ref[1] + ground * std::sin(az),
                    o.x_ref[2] + o.standoff * std::sin(el)};
  const Vec3 along{-std::sin(az), std::cos(az), 0.0};
  const double half = ground * std::tan(0.5 * o.aperture_deg * deg);
  std::vector<Vec3> pos(o.pulses);
  for (std::size_t j = 0; j < o.pulses; ++j) {
    const double s = 2.0 * half * fraction(j, o.pulses);
    pos[j] = {center[0] + s * along[0], center[1] + s * along[1], center[2]};
  }
  return SarGeometry::monostatic(std::move(pos),
                                 band_frequencies(o.center_frequency, o.bandwidth, o.frequencies),
                                 o.x_ref);
}

SarGeometry circular_collection(const CollectionOptions& o) {
  check(o);
  const double deg = std::numbers::pi / 180.0;
  const double el = o.elevation_deg * deg;
  const double ground = o.standoff * std::cos(el);
  std::vector<Vec3> pos(o.pulses);
  for (std::size_t j = 0; j < o.pulses; ++j) {
    const double az = (o.azimuth_deg + o.aperture_deg * fraction(j, o.pulses)) * deg;
    pos[j] = {o.x_ref[0] + ground * std::cos(az), o.x_ref[1] + ground * std::sin(az),
              o.x_ref[2] + o.standoff * std::sin(el)};
  }
  return SarGeometry::monostatic(std::move(pos),
                                 band_frequencies(o.center_frequency, o.bandwidth, o.frequencies),
                                 o.x_ref);
}

}  // namespace proxmag
