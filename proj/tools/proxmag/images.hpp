#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "proxmag/core.hpp"

namespace proxmag::cli {

/// 8-bit grayscale or RGB raster, row-major.
struct Raster {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 1;  // 1 or 3
  std::vector<std::uint8_t> pixels;
};

/// 20 log10(|z| / peak) clipped to [db_min, db_max] and mapped linearly to
/// 0..255. Zero samples, and every sample of an all-zero plane, map to 0.
[[nodiscard]] Raster render_mag_db(std::span<const cplx> plane, std::size_t height,
                                   std::size_t width, double db_min, double db_max);

/// Angle in [-pi, pi) on a cyclic hue wheel (red at -pi and pi).
[[nodiscard]] Raster render_phase(std::span<const cplx> plane, std::size_t height,
                                  std::size_t width);

/// Angle of z1 conj(z2) on the same wheel.
[[nodiscard]] Raster render_phase_diff(std::span<const cplx> a, std::span<const cplx> b,
                                       std::size_t height, std::size_t width);

[[nodiscard]] std::array<std::uint8_t, 3> phase_color(double angle);

/// Binary PGM (P5) for grayscale, PPM (P6) for RGB.
void write_pnm(const std::filesystem::path& path, const Raster& r);
void write_png(const std::filesystem::path& path, const Raster& r);
/// Chooses the format from the extension (.pgm/.ppm/.png).
void write_raster(const std::filesystem::path& path, const Raster& r);

}  // namespace proxmag::cli
