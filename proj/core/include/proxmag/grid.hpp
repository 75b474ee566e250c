#pragma once

#include <cstddef>

namespace proxmag {

/// Flat H x W pixel grid at height 0. Pixel (i, j) sits at
/// (origin_x + j * spacing, origin_y + i * spacing), in meters.
struct SceneGrid {
  std::size_t height = 0;
  std::size_t width = 0;
  double spacing = 1.0;
  double origin_x = 0.0;
  double origin_y = 0.0;

  [[nodiscard]] double x(std::size_t j) const { return origin_x + static_cast<double>(j) * spacing; }
  [[nodiscard]] double y(std::size_t i) const { return origin_y + static_cast<double>(i) * spacing; }
  [[nodiscard]] std::size_t pixels() const { return height * width; }

  /// Grid whose center lies on (cx, cy).
  [[nodiscard]] static SceneGrid centered(std::size_t height, std::size_t width, double spacing,
                                          double cx = 0.0, double cy = 0.0) {
    return {height, width, spacing,
            cx - 0.5 * static_cast<double>(width - 1) * spacing,
            cy - 0.5 * static_cast<double>(height - 1) * spacing};
  }
};

}  // namespace proxmag
