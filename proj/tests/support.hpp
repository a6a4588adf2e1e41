#pragma once

// Shared fixtures for the test suites: terse document builders and a PNG
// reader that only understands what the engine writes (8-bit RGB, filter 0).

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <zlib.h>

#include "guicomp/guicomp.hpp"

namespace testing_support {

using namespace guicomp;

inline Element leaf(std::string id, ElementKind kind, std::int64_t x, std::int64_t y, std::int64_t w,
                    std::int64_t h, std::optional<Rgb> fill = std::nullopt) {
  Element e;
  e.id = std::move(id);
  e.kind = kind;
  e.bounds = {x, y, w, h};
  e.fill_color = fill;
  return e;
}

inline Element text_leaf(std::string id, std::int64_t x, std::int64_t y, std::int64_t w, std::int64_t h,
                         std::string family, double size, Rgb color = {0, 0, 0}) {
  Element e = leaf(std::move(id), ElementKind::text, x, y, w, h);
  e.text_style = TextStyle{"label", std::move(family), size, color};
  return e;
}

inline LayoutDocument doc_of(std::vector<Element> elements, std::int64_t w = 360, std::int64_t h = 640) {
  LayoutDocument d;
  d.canvas_width = w;
  d.canvas_height = h;
  d.elements = std::move(elements);
  return d;
}

struct DecodedPng {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> rgb;

  const std::uint8_t* at(std::uint32_t x, std::uint32_t y) const { return &rgb[(std::size_t{y} * width + x) * 3]; }
};

inline std::uint32_t read_be32(const std::string& s, std::size_t at) {
  return (std::uint32_t(std::uint8_t(s[at])) << 24) | (std::uint32_t(std::uint8_t(s[at + 1])) << 16) |
         (std::uint32_t(std::uint8_t(s[at + 2])) << 8) | std::uint32_t(std::uint8_t(s[at + 3]));
}

inline DecodedPng decode_png(const std::string& png) {
  static const char sig[8] = {'\x89', 'P', 'N', 'G', '\r', '\n', '\x1a', '\n'};
  if (png.size() < 8 || std::memcmp(png.data(), sig, 8) != 0) throw std::runtime_error("bad signature");
  DecodedPng out;
  std::string idat;
  std::size_t pos = 8;
  while (pos + 12 <= png.size()) {
    const std::uint32_t len = read_be32(png, pos);
    const std::string type = png.substr(pos + 4, 4);
    const std::string data = png.substr(pos + 8, len);
    const std::uint32_t crc = read_be32(png, pos + 8 + len);
    uLong c = crc32(0, reinterpret_cast<const Bytef*>(png.data() + pos + 4), len + 4);
    if (c != crc) throw std::runtime_error("chunk crc mismatch in " + type);
    if (type == "IHDR") {
      out.width = read_be32(data, 0);
      out.height = read_be32(data, 4);
      if (data[8] != 8 || data[9] != 2) throw std::runtime_error("expected 8-bit RGB");
    } else if (type == "IDAT") {
      idat += data;
    } else if (type == "IEND") {
      break;
    }
    pos += 12 + len;
  }
  const std::size_t stride = std::size_t{out.width} * 3 + 1;
  std::vector<std::uint8_t> raw(stride * out.height);
  uLongf raw_len = raw.size();
  if (uncompress(raw.data(), &raw_len, reinterpret_cast<const Bytef*>(idat.data()), idat.size()) != Z_OK ||
      raw_len != raw.size())
    throw std::runtime_error("inflate failed");
  out.rgb.reserve(std::size_t{out.width} * out.height * 3);
  for (std::uint32_t y = 0; y < out.height; ++y) {
    if (raw[y * stride] != 0) throw std::runtime_error("unexpected filter type");
    out.rgb.insert(out.rgb.end(), raw.begin() + y * stride + 1, raw.begin() + (y + 1) * stride);
  }
  return out;
}

// Fresh scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("guicomp_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_support
