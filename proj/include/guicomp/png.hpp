#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <zlib.h>

#include "guicomp/errors.hpp"

namespace guicomp {

// 8-bit RGB image, row-major.
struct RgbImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> pixels;  // width * height * 3

  std::uint8_t* at(std::uint32_t x, std::uint32_t y) { return &pixels[(y * width + x) * 3]; }
  const std::uint8_t* at(std::uint32_t x, std::uint32_t y) const {
    return &pixels[(y * width + x) * 3];
  }
};

namespace detail {

inline void put_be32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>((v >> 24) & 0xFF));
  out.push_back(static_cast<char>((v >> 16) & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>(v & 0xFF));
}

inline void put_png_chunk(std::string& out, const char type[4], const std::string& data) {
  put_be32(out, static_cast<std::uint32_t>(data.size()));
  std::string body(type, 4);
  body += data;
  out += body;
  put_be32(out, static_cast<std::uint32_t>(
                    crc32(0L, reinterpret_cast<const Bytef*>(body.data()), body.size())));
}

}  // namespace detail

// Encodes an RGB image as a PNG byte string (filter type 0 on every row).
inline std::string encode_png(const RgbImage& img) {
  if (img.width == 0 || img.height == 0 ||
      img.pixels.size() != std::size_t{img.width} * img.height * 3)
    throw ArgumentError("encode_png: inconsistent image dimensions");

  std::string raw;
  raw.reserve((std::size_t{img.width} * 3 + 1) * img.height);
  for (std::uint32_t y = 0; y < img.height; ++y) {
    raw.push_back('\0');
    raw.append(reinterpret_cast<const char*>(img.at(0, y)), std::size_t{img.width} * 3);
  }
  uLongf zlen = compressBound(raw.size());
  std::string z(zlen, '\0');
  if (compress2(reinterpret_cast<Bytef*>(z.data()), &zlen,
                reinterpret_cast<const Bytef*>(raw.data()), raw.size(), 6) != Z_OK)
    throw IoError("encode_png: deflate failed");
  z.resize(zlen);

  std::string out("\x89PNG\r\n\x1a\n", 8);
  std::string ihdr;
  detail::put_be32(ihdr, img.width);
  detail::put_be32(ihdr, img.height);
  ihdr += std::string("\x08\x02\x00\x00\x00", 5);  // 8-bit, truecolor, deflate, no interlace
  detail::put_png_chunk(out, "IHDR", ihdr);
  detail::put_png_chunk(out, "IDAT", z);
  detail::put_png_chunk(out, "IEND", "");
  return out;
}

}  // namespace guicomp
