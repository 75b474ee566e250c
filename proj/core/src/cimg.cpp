#include "proxmag/cimg.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace proxmag {
namespace {

constexpr char kMagic[8] = {'C', 'I', 'M', 'G', '0', '0', '0', '1'};
constexpr std::size_t kHeaderBytes = 8 + 3 * 4;

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  std::uint8_t bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.insert(out.end(), bytes, bytes + sizeof(T));
}

template <typename T>
T get_le(std::span<const std::uint8_t> in, std::size_t offset) {
  std::uint8_t bytes[sizeof(T)];
  std::memcpy(bytes, in.data() + offset, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

std::uint32_t checked_u32(std::size_t v) {
  if (v > 0xFFFFFFFFu) throw InvalidInput("CIMG: dimension exceeds u32");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::vector<std::uint8_t> encode_cimg(const ComplexImage& image) {
  const Shape& s = image.shape();
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + 16 * image.size());
  for (char ch : kMagic) out.push_back(static_cast<std::uint8_t>(ch));
  put_le(out, checked_u32(s.channels));
  put_le(out, checked_u32(s.height));
  put_le(out, checked_u32(s.width));
  for (const cplx& z : image.data()) {
    put_le(out, z.real());
    put_le(out, z.imag());
  }
  return out;
}

ComplexImage decode_cimg(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw InvalidInput("CIMG: bad magic");
  }
  const Shape s{get_le<std::uint32_t>(bytes, 8), get_le<std::uint32_t>(bytes, 12),
                get_le<std::uint32_t>(bytes, 16)};
  if (bytes.size() != kHeaderBytes + 16 * s.size()) {
    throw InvalidInput("CIMG: payload length does not match header " + to_string(s));
  }
  std::vector<cplx> data(s.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::size_t off = kHeaderBytes + 16 * i;
    data[i] = {get_le<double>(bytes, off), get_le<double>(bytes, off + 8)};
  }
  return ComplexImage(s, std::move(data));
}

void write_cimg(const std::filesystem::path& path, const ComplexImage& image) {
  const auto bytes = encode_cimg(image);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write failed: " + path.string());
}

ComplexImage read_cimg(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for reading: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  try {
    return decode_cimg(bytes);
  } catch (const InvalidInput& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace proxmag
