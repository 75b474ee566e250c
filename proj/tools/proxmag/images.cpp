#include "proxmag/images.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <string>

#include "proxmag/error.hpp"

namespace proxmag::cli {

Raster render_mag_db(std::span<const cplx> plane, std::size_t height, std::size_t width,
                     double db_min, double db_max) {
  if (plane.size() != height * width) throw InvalidInput("render: plane size mismatch");
  if (!(db_min < db_max)) throw InvalidInput("render: need db_min < db_max");
  Raster r{width, height, 1, std::vector<std::uint8_t>(plane.size(), 0)};
  double peak = 0.0;
  for (const cplx& z : plane) peak = std::max(peak, std::abs(z));
  if (peak == 0.0) return r;
  for (std::size_t i = 0; i < plane.size(); ++i) {
    const double m = std::abs(plane[i]);
    if (m == 0.0) continue;
    const double db = std::clamp(20.0 * std::log10(m / peak), db_min, db_max);
    r.pixels[i] = static_cast<std::uint8_t>(std::lround(255.0 * (db - db_min) / (db_max - db_min)));
  }
  return r;
}

std::array<std::uint8_t, 3> phase_color(double angle) {
  // Hue wheel: h in [0, 6) sweeps red, yellow, green, cyan, blue, magenta.
  double h = (angle + std::numbers::pi) / (2.0 * std::numbers::pi);
  h -= std::floor(h);
  h *= 6.0;
  const int sector = std::min(static_cast<int>(h), 5);
  const double f = h - sector;
  const double up = f, down = 1.0 - f;
  double rgb[3];
  switch (sector) {
    case 0: rgb[0] = 1; rgb[1] = up; rgb[2] = 0; break;
    case 1: rgb[0] = down; rgb[1] = 1; rgb[2] = 0; break;
    case 2: rgb[0] = 0; rgb[1] = 1; rgb[2] = up; break;
    case 3: rgb[0] = 0; rgb[1] = down; rgb[2] = 1; break;
    case 4: rgb[0] = up; rgb[1] = 0; rgb[2] = 1; break;
    default: rgb[0] = 1; rgb[1] = 0; rgb[2] = down; break;
  }
  return {static_cast<std::uint8_t>(std::lround(255.0 * rgb[0])),
          static_cast<std::uint8_t>(std::lround(255.0 * rgb[1])),
          static_cast<std::uint8_t>(std::lround(255.0 * rgb[2]))};
}

namespace {

Raster color_angles(std::span<const double> angle, std::size_t height, std::size_t width) {
  Raster r{width, height, 3, std::vector<std::uint8_t>(3 * angle.size())};
  for (std::size_t i = 0; i < angle.size(); ++i) {
    const auto c = phase_color(angle[i]);
    std::copy(c.begin(), c.end(), r.pixels.begin() + static_cast<std::ptrdiff_t>(3 * i));
  }
  return r;
}

}  // namespace

Raster render_phase(std::span<const cplx> plane, std::size_t height, std::size_t width) {
  if (plane.size() != height * width) throw InvalidInput("render: plane size mismatch");
  std::vector<double> a(plane.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::arg(plane[i]);
  return color_angles(a, height, width);
}

Raster render_phase_diff(std::span<const cplx> a, std::span<const cplx> b, std::size_t height,
                         std::size_t width) {
  if (a.size() != b.size()) throw InvalidInput("phase-diff: inputs differ in shape");
  if (a.size() != height * width) throw InvalidInput("render: plane size mismatch");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::arg(a[i] * std::conj(b[i]));
  return color_angles(d, height, width);
}

void write_pnm(const std::filesystem::path& path, const Raster& r) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << (r.channels == 3 ? "P6" : "P5") << "\n" << r.width << " " << r.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(r.pixels.data()),
            static_cast<std::streamsize>(r.pixels.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void write_png(const std::filesystem::path& path, const Raster& r) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(r.width);
  image.height = static_cast<png_uint_32>(r.height);
  image.format = r.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const std::string name = path.string();
  if (!png_image_write_to_file(&image, name.c_str(), 0, r.pixels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw IoError("png write failed for " + name + ": " + msg);
  }
}

void write_raster(const std::filesystem::path& path, const Raster& r) {
  const std::string ext = path.extension().string();
  if (ext == ".png") {
    write_png(path, r);
  } else if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") {
    write_pnm(path, r);
  } else {
    throw InvalidInput("unsupported image extension '" + ext + "' (use .pgm, .ppm or .png)");
  }
}

}  // namespace proxmag::cli
