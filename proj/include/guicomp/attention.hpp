#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "guicomp/base64.hpp"
#include "guicomp/errors.hpp"
#include "guicomp/grid.hpp"
#include "guicomp/layout.hpp"
#include "guicomp/png.hpp"

namespace guicomp {

// Row-major grid of 0-255 attention values, `width` columns by `height` rows.
struct AttentionMap {
  std::size_t width = grid::kCols;
  std::size_t height = grid::kRows;
  std::vector<std::uint8_t> values;

  std::uint8_t at(std::size_t col, std::size_t row) const { return values[row * width + col]; }

  friend bool operator==(const AttentionMap&, const AttentionMap&) = default;
};

// Anything that can turn a layout into an attention map. Implementations must
// be safe to call concurrently; failures are reported as AttentionUnavailable.
class AttentionModel {
 public:
  virtual ~AttentionModel() = default;
  virtual std::string name() const = 0;
  virtual AttentionMap predict(const LayoutDocument& doc) const = 0;
};

struct SaliencyWeights {
  double image_kinds = 1.0;    // image, image_button, icon
  double text_kinds = 0.9;     // text, edit_text; scaled by min(1, font_size / 24)
  double interactive = 0.8;    // button, pagination
  double structural = 0.4;     // shape, container
  double reference_font_size = 24.0;
  double default_font_size = 14.0;  // text leaves without a style
  double top_bias = 1.2;
  double top_slope = 0.4;
  double blur_sigma_cells = 2.5;
};

namespace saliency {

inline double kind_weight(const Element& e, const SaliencyWeights& w) {
  switch (e.kind) {
    case ElementKind::image:
    case ElementKind::image_button:
    case ElementKind::icon: return w.image_kinds;
    case ElementKind::text:
    case ElementKind::edit_text: {
      const double fs = e.text_style ? e.text_style->font_size : w.default_font_size;
      return w.text_kinds * std::min(1.0, fs / w.reference_font_size);
    }
    case ElementKind::button:
    case ElementKind::pagination: return w.interactive;
    case ElementKind::shape:
    case ElementKind::container: return w.structural;
  }
  return w.structural;
}

// Normalized Gaussian taps for offsets -radius..radius.
inline std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i)
    k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
  return k;
}

// Separable blur; taps falling off the grid are dropped and the remaining
// weights renormalized, so a constant field stays constant.
inline std::vector<double> blur(const std::vector<double>& in, std::size_t cols, std::size_t rows,
                                double sigma) {
  const auto k = gaussian_kernel(sigma);
  const int radius = static_cast<int>(k.size() / 2);
  std::vector<double> tmp(in.size(), 0.0), out(in.size(), 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      double acc = 0.0, norm = 0.0;
      for (int d = -radius; d <= radius; ++d) {
        const auto cc = static_cast<std::int64_t>(c) + d;
        if (cc < 0 || cc >= static_cast<std::int64_t>(cols)) continue;
        acc += k[d + radius] * in[r * cols + cc];
        norm += k[d + radius];
      }
      tmp[r * cols + c] = acc / norm;
    }
  }
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      double acc = 0.0, norm = 0.0;
      for (int d = -radius; d <= radius; ++d) {
        const auto rr = static_cast<std::int64_t>(r) + d;
        if (rr < 0 || rr >= static_cast<std::int64_t>(rows)) continue;
        acc += k[d + radius] * tmp[rr * cols + c];
        norm += k[d + radius];
      }
      out[r * cols + c] = acc / norm;
    }
  }
  return out;
}

inline AttentionMap quantize(const std::vector<double>& field, std::size_t cols, std::size_t rows) {
  AttentionMap m{cols, rows, std::vector<std::uint8_t>(cols * rows, 0)};
  const double peak = *std::max_element(field.begin(), field.end());
  if (!(peak > 0.0)) return m;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double v = std::floor(255.0 * field[i] / peak + 0.5);
    m.values[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
  }
  return m;
}

}  // namespace saliency

// Layout-driven attention baseline: per-leaf kind weight x sqrt(relative
// area) x top bias, accumulated by cell coverage, blurred, scaled to 0-255.
inline AttentionMap baseline_saliency(const LayoutDocument& doc, const SaliencyWeights& w = {}) {
  constexpr std::size_t cols = grid::kCols, rows = grid::kRows;
  std::vector<double> raw(cols * rows, 0.0);
  const double cw = static_cast<double>(doc.canvas_width);
  const double ch = static_cast<double>(doc.canvas_height);
  const double canvas_area = cw * ch;
  const double cell_area = (cw / cols) * (ch / rows);
  const auto ls = leaves(doc);
  if (ls.empty()) return AttentionMap{cols, rows, std::vector<std::uint8_t>(cols * rows, 0)};

  for (const Element* e : ls) {
    const Rect& r = e->bounds;
    const double cy = static_cast<double>(r.y) + static_cast<double>(r.h) / 2.0;
    const double top_prior = w.top_bias - w.top_slope * (cy / ch);
    const double kw = saliency::kind_weight(*e, w);
    if (r.w <= 0 || r.h <= 0) {
      // Degenerate leaves mark their center cell as if they covered one pixel.
      const double cx = static_cast<double>(r.x) + static_cast<double>(r.w) / 2.0;
      const auto col = std::min<std::size_t>(cols - 1, static_cast<std::size_t>(cx / cw * cols));
      const auto row = std::min<std::size_t>(rows - 1, static_cast<std::size_t>(cy / ch * rows));
      raw[row * cols + col] += kw * std::sqrt(1.0 / canvas_area) * top_prior;
      continue;
    }
    const double base = kw * std::sqrt(r.area() / canvas_area) * top_prior;
    const double x0 = double(r.x), x1 = double(r.right()), y0 = double(r.y), y1 = double(r.bottom());
    const auto cs = grid::cells_overlapping(x0, x1, doc.canvas_width, cols);
    const auto rs = grid::cells_overlapping(y0, y1, doc.canvas_height, rows);
    for (std::size_t row = rs.first; row < rs.last; ++row) {
      const double oy = grid::overlap(y0, y1, grid::edge(row, doc.canvas_height, rows),
                                      grid::edge(row + 1, doc.canvas_height, rows));
      if (oy <= 0.0) continue;
      for (std::size_t col = cs.first; col < cs.last; ++col) {
        const double ox = grid::overlap(x0, x1, grid::edge(col, doc.canvas_width, cols),
                                        grid::edge(col + 1, doc.canvas_width, cols));
        if (ox > 0.0) raw[row * cols + col] += base * (ox * oy / cell_area);
      }
    }
  }
  return saliency::quantize(saliency::blur(raw, cols, rows, w.blur_sigma_cells), cols, rows);
}

class BaselineSaliencyModel final : public AttentionModel {
 public:
  explicit BaselineSaliencyModel(SaliencyWeights weights = {}) : weights_(weights) {}
  std::string name() const override { return "baseline"; }
  AttentionMap predict(const LayoutDocument& doc) const override {
    return baseline_saliency(doc, weights_);
  }

 private:
  SaliencyWeights weights_;
};

// Runs the model and enforces the map contract on its output.
inline AttentionMap attention_map(const LayoutDocument& doc, const AttentionModel& model) {
  AttentionMap m;
  try {
    m = model.predict(doc);
  } catch (const AttentionUnavailable&) {
    throw;
  } catch (const std::exception& e) {
    throw AttentionUnavailable(model.name() + ": " + e.what());
  }
  if (m.width != grid::kCols || m.height != grid::kRows || m.values.size() != m.width * m.height)
    throw AttentionUnavailable(model.name() + ": produced a map of the wrong shape");
  if (leaves(doc).empty()) std::fill(m.values.begin(), m.values.end(), std::uint8_t{0});
  return m;
}

// Piecewise-linear blue -> green -> yellow -> red over anchors 0/85/170/255.
inline Rgb heat_color(std::uint8_t value) {
  struct Anchor {
    int at;
    std::array<double, 3> rgb;
  };
  static constexpr std::array<Anchor, 4> kAnchors{{{0, {0, 0, 255}},
                                                   {85, {0, 255, 0}},
                                                   {170, {255, 255, 0}},
                                                   {255, {255, 0, 0}}}};
  std::size_t seg = value <= 85 ? 0 : value <= 170 ? 1 : 2;
  const auto& a = kAnchors[seg];
  const auto& b = kAnchors[seg + 1];
  const double t = static_cast<double>(value - a.at) / static_cast<double>(b.at - a.at);
  auto lerp = [t](double x, double y) {
    return static_cast<std::uint8_t>(std::floor(x + (y - x) * t + 0.5));
  };
  return Rgb{lerp(a.rgb[0], b.rgb[0]), lerp(a.rgb[1], b.rgb[1]), lerp(a.rgb[2], b.rgb[2])};
}

inline RgbImage render_heatmap(const AttentionMap& map) {
  RgbImage img{static_cast<std::uint32_t>(map.width), static_cast<std::uint32_t>(map.height), {}};
  img.pixels.resize(map.values.size() * 3);
  for (std::size_t i = 0; i < map.values.size(); ++i) {
    const Rgb c = heat_color(map.values[i]);
    img.pixels[3 * i] = c.r;
    img.pixels[3 * i + 1] = c.g;
    img.pixels[3 * i + 2] = c.b;
  }
  return img;
}

inline std::string render_heatmap_png(const AttentionMap& map) {
  return encode_png(render_heatmap(map));
}

inline nlohmann::json to_json(const AttentionMap& m) {
  const std::string_view bytes(reinterpret_cast<const char*>(m.values.data()), m.values.size());
  return {{"width", m.width}, {"height", m.height}, {"values", base64_encode(bytes)}};
}

}  // namespace guicomp
