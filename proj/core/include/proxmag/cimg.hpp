#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "proxmag/core.hpp"

namespace proxmag {

/// Raw complex image container "CIMG v1":
///   8 bytes  magic "CIMG0001"
///   3 x u32  K, H, W (little endian)
///   K*H*W x (f64 re, f64 im), little endian, channel-major row-major.
[[nodiscard]] std::vector<std::uint8_t> encode_cimg(const ComplexImage& image);
[[nodiscard]] ComplexImage decode_cimg(std::span<const std::uint8_t> bytes);

void write_cimg(const std::filesystem::path& path, const ComplexImage& image);
[[nodiscard]] ComplexImage read_cimg(const std::filesystem::path& path);

}  // namespace proxmag
