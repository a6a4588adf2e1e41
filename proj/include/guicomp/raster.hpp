#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <vector>

#include "guicomp/grid.hpp"
#include "guicomp/layout.hpp"

namespace guicomp {

inline constexpr std::size_t kRasterChannels = 3;
inline constexpr std::size_t kRasterSize = grid::kRows * grid::kCols * kRasterChannels;  // 13,500

// Channel groups of the wireframe raster.
enum class RasterChannel : std::size_t { text = 0, image = 1, other = 2 };

inline RasterChannel channel_of(ElementKind k) {
  switch (k) {
    case ElementKind::text:
    case ElementKind::edit_text: return RasterChannel::text;
    case ElementKind::image:
    case ElementKind::image_button:
    case ElementKind::icon: return RasterChannel::image;
    default: return RasterChannel::other;
  }
}

// 90 x 50 x 3 coverage tensor, stored row-major as (row, col, channel).
struct RasterTensor {
  std::vector<float> values = std::vector<float>(kRasterSize, 0.0f);

  static constexpr std::size_t index(std::size_t row, std::size_t col, std::size_t ch) {
    return (row * grid::kCols + col) * kRasterChannels + ch;
  }
  float at(std::size_t row, std::size_t col, std::size_t ch) const {
    return values[index(row, col, ch)];
  }

  friend bool operator==(const RasterTensor&, const RasterTensor&) = default;
};

namespace detail {

struct Box {
  double x0, y0, x1, y1;
};

inline double union_area(std::vector<Box>& boxes) {
  std::vector<double> xs;
  for (const auto& b : boxes) {
    xs.push_back(b.x0);
    xs.push_back(b.x1);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double total = 0.0;
  std::vector<std::pair<double, double>> spans;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    spans.clear();
    for (const auto& b : boxes)
      if (b.x0 <= xs[i] && b.x1 >= xs[i + 1]) spans.emplace_back(b.y0, b.y1);
    if (spans.empty()) continue;
    std::sort(spans.begin(), spans.end());
    double covered = 0.0, a = spans[0].first, z = spans[0].second;
    for (std::size_t k = 1; k < spans.size(); ++k) {
      if (spans[k].first > z) {
        covered += z - a;
        a = spans[k].first;
        z = spans[k].second;
      } else {
        z = std::max(z, spans[k].second);
      }
    }
    covered += z - a;
    total += covered * (xs[i + 1] - xs[i]);
  }
  return total;
}

}  // namespace detail

// Cell value = fraction of the cell covered by at least one leaf of the
// channel's group (union, not sum).
inline RasterTensor rasterize(const LayoutDocument& doc) {
  constexpr std::size_t rows = grid::kRows, cols = grid::kCols;
  RasterTensor out;
  std::array<std::vector<std::vector<detail::Box>>, kRasterChannels> clipped;
  for (auto& c : clipped) c.resize(rows * cols);

  for (const Element* e : leaves(doc)) {
    const Rect& r = e->bounds;
    if (r.w <= 0 || r.h <= 0) continue;
    auto& cells = clipped[static_cast<std::size_t>(channel_of(e->kind))];
    const double x0 = double(r.x), x1 = double(r.right()), y0 = double(r.y), y1 = double(r.bottom());
    const auto cs = grid::cells_overlapping(x0, x1, doc.canvas_width, cols);
    const auto rs = grid::cells_overlapping(y0, y1, doc.canvas_height, rows);
    for (std::size_t row = rs.first; row < rs.last; ++row) {
      const double cy0 = grid::edge(row, doc.canvas_height, rows);
      const double cy1 = grid::edge(row + 1, doc.canvas_height, rows);
      const double by0 = std::max(y0, cy0), by1 = std::min(y1, cy1);
      if (by1 <= by0) continue;
      for (std::size_t col = cs.first; col < cs.last; ++col) {
        const double cx0 = grid::edge(col, doc.canvas_width, cols);
        const double cx1 = grid::edge(col + 1, doc.canvas_width, cols);
        const double bx0 = std::max(x0, cx0), bx1 = std::min(x1, cx1);
        if (bx1 <= bx0) continue;
        cells[row * cols + col].push_back({bx0, by0, bx1, by1});
      }
    }
  }

  for (std::size_t ch = 0; ch < kRasterChannels; ++ch) {
    for (std::size_t row = 0; row < rows; ++row) {
      const double cy0 = grid::edge(row, doc.canvas_height, rows);
      const double cy1 = grid::edge(row + 1, doc.canvas_height, rows);
      for (std::size_t col = 0; col < cols; ++col) {
        auto& boxes = clipped[ch][row * cols + col];
        if (boxes.empty()) continue;
        const double cx0 = grid::edge(col, doc.canvas_width, cols);
        const double cx1 = grid::edge(col + 1, doc.canvas_width, cols);
        const bool full = std::any_of(boxes.begin(), boxes.end(), [&](const detail::Box& b) {
          return b.x0 <= cx0 && b.y0 <= cy0 && b.x1 >= cx1 && b.y1 >= cy1;
        });
        const double frac =
            full ? 1.0 : detail::union_area(boxes) / ((cx1 - cx0) * (cy1 - cy0));
        out.values[RasterTensor::index(row, col, ch)] =
            static_cast<float>(std::clamp(frac, 0.0, 1.0));
      }
    }
  }
  return out;
}

}  // namespace guicomp
