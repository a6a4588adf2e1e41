#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "guicomp/layout.hpp"
#include "guicomp/png.hpp"

namespace guicomp {

// Flat-color fill used when an element has no fill of its own.
inline Rgb kind_color(ElementKind k) {
  switch (k) {
    case ElementKind::text: return {120, 144, 156};
    case ElementKind::edit_text: return {207, 216, 220};
    case ElementKind::button: return {66, 133, 244};
    case ElementKind::image_button: return {129, 199, 132};
    case ElementKind::image: return {165, 214, 167};
    case ElementKind::icon: return {255, 183, 77};
    case ElementKind::shape: return {224, 224, 224};
    case ElementKind::pagination: return {149, 117, 205};
    case ElementKind::container: return {245, 245, 245};
  }
  return {224, 224, 224};
}

// Draws every element (parents before children) as a filled box with a
// one-pixel outline, on a white background `width` pixels wide.
inline RgbImage render_wireframe(const LayoutDocument& doc, std::uint32_t width = 144) {
  const double scale = static_cast<double>(width) / static_cast<double>(doc.canvas_width);
  const auto height = static_cast<std::uint32_t>(
      std::max(1.0, std::round(static_cast<double>(doc.canvas_height) * scale)));
  RgbImage img{width, height, std::vector<std::uint8_t>(std::size_t{width} * height * 3, 255)};

  auto put = [&](std::int64_t x, std::int64_t y, Rgb c) {
    if (x < 0 || y < 0 || x >= width || y >= height) return;
    auto* p = img.at(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y));
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  };
  auto draw = [&](const auto& self, const Element& e) -> void {
    const Rect& r = e.bounds;
    const auto x0 = static_cast<std::int64_t>(std::floor(r.x * scale));
    const auto y0 = static_cast<std::int64_t>(std::floor(r.y * scale));
    const auto x1 = std::max(x0 + 1, static_cast<std::int64_t>(std::ceil(r.right() * scale)));
    const auto y1 = std::max(y0 + 1, static_cast<std::int64_t>(std::ceil(r.bottom() * scale)));
    const Rgb fill = e.fill_color.value_or(kind_color(e.kind));
    const Rgb edge{static_cast<std::uint8_t>(fill.r * 0.6), static_cast<std::uint8_t>(fill.g * 0.6),
                   static_cast<std::uint8_t>(fill.b * 0.6)};
    for (auto y = y0; y < y1; ++y) {
      for (auto x = x0; x < x1; ++x) {
        const bool border = x == x0 || y == y0 || x == x1 - 1 || y == y1 - 1;
        put(x, y, border ? edge : fill);
      }
    }
    for (const auto& c : e.children) self(self, c);
  };
  for (const auto& e : doc.elements) draw(draw, e);
  return img;
}

inline std::string render_wireframe_png(const LayoutDocument& doc, std::uint32_t width = 144) {
  return encode_png(render_wireframe(doc, width));
}

}  // namespace guicomp
