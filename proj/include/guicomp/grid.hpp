#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>

#include "guicomp/layout.hpp"

namespace guicomp::grid {

// Shared geometry of every derived artifact: the canvas is mapped affinely
// onto 90 rows x 50 columns.
inline constexpr std::size_t kRows = 90;
inline constexpr std::size_t kCols = 50;

// Edge of cell `i` along an axis of `extent` pixels split into `cells`.
inline double edge(std::size_t i, std::int64_t extent, std::size_t cells) {
  return static_cast<double>(i) * static_cast<double>(extent) / static_cast<double>(cells);
}

// Half-open index range [first, last) of cells overlapped by [lo, hi).
struct CellSpan {
  std::size_t first = 0;
  std::size_t last = 0;
};

inline CellSpan cells_overlapping(double lo, double hi, std::int64_t extent, std::size_t cells) {
  if (hi <= lo) return {};
  const double unit = static_cast<double>(extent) / static_cast<double>(cells);
  auto first = static_cast<std::int64_t>(lo / unit);
  auto last = static_cast<std::int64_t>(hi / unit) + 1;
  first = std::clamp<std::int64_t>(first - 1, 0, static_cast<std::int64_t>(cells));
  last = std::clamp<std::int64_t>(last, 0, static_cast<std::int64_t>(cells));
  return {static_cast<std::size_t>(first), static_cast<std::size_t>(last)};
}

inline double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

}  // namespace guicomp::grid
