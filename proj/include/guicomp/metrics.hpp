#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "guicomp/layout.hpp"

namespace guicomp {

enum class Metric { element_balance, alignment, color_unity, font_unity, element_size, density };

inline constexpr std::array<Metric, 6> kAllMetrics = {
    Metric::element_balance, Metric::alignment,    Metric::color_unity,
    Metric::font_unity,      Metric::element_size, Metric::density};

inline std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::element_balance: return "element_balance";
    case Metric::alignment: return "alignment";
    case Metric::color_unity: return "color_unity";
    case Metric::font_unity: return "font_unity";
    case Metric::element_size: return "element_size";
    case Metric::density: return "density";
  }
  return "";
}

inline std::optional<Metric> metric_from_string(std::string_view s) {
  for (auto m : kAllMetrics)
    if (to_string(m) == s) return m;
  return std::nullopt;
}

// element_size and density are best at 0.5; the other four at 1.0.
inline bool midpoint_is_best(Metric m) {
  return m == Metric::element_size || m == Metric::density;
}

struct MetricReport {
  double element_balance = 1.0;
  double alignment = 1.0;
  double color_unity = 1.0;
  double font_unity = 1.0;
  double element_size = 0.5;
  double density = 0.0;
  double overall = 0.0;

  double get(Metric m) const {
    switch (m) {
      case Metric::element_balance: return element_balance;
      case Metric::alignment: return alignment;
      case Metric::color_unity: return color_unity;
      case Metric::font_unity: return font_unity;
      case Metric::element_size: return element_size;
      case Metric::density: return density;
    }
    return 0.0;
  }

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

namespace metrics {

inline constexpr double kBalanceEpsilon = 1e-9;
inline constexpr double kAlignTolerancePx = 4.0;
inline constexpr double kTextColorWeight = 0.2;
// A bucket is dominant when it holds at least 1/20 (5%) of the total weight.
inline constexpr double kDominantDivisor = 20.0;
inline constexpr double kLogicalCanvasWidth = 360.0;
inline constexpr double kTouchTargetArea = 44.0 * 44.0;

inline double element_balance(const LayoutDocument& doc) {
  const auto ls = leaves(doc);
  if (ls.empty()) return 1.0;
  const double cx = static_cast<double>(doc.canvas_width) / 2.0;
  const double cy = static_cast<double>(doc.canvas_height) / 2.0;
  double left = 0, right = 0, top = 0, bottom = 0;
  for (const Element* e : ls) {
    const Rect& r = e->bounds;
    const double x0 = static_cast<double>(r.x), x1 = static_cast<double>(r.right());
    const double y0 = static_cast<double>(r.y), y1 = static_cast<double>(r.bottom());
    const double w = x1 - x0, h = y1 - y0;
    // Split exactly at the center lines.
    left += std::max(0.0, std::min(x1, cx) - x0) * h;
    right += std::max(0.0, x1 - std::max(x0, cx)) * h;
    top += std::max(0.0, std::min(y1, cy) - y0) * w;
    bottom += std::max(0.0, y1 - std::max(y0, cy)) * w;
  }
  const double imbalance = (std::abs(left - right) / std::max(left + right, kBalanceEpsilon) +
                            std::abs(top - bottom) / std::max(top + bottom, kBalanceEpsilon)) /
                           2.0;
  return std::clamp(1.0 - imbalance, 0.0, 1.0);
}

// Number of clusters after an ascending sweep: a value joins the current
// cluster when it lies within `tolerance` of that cluster's seed.
inline std::size_t count_guide_clusters(std::vector<double> coords, double tolerance) {
  if (coords.empty()) return 0;
  std::sort(coords.begin(), coords.end());
  std::size_t clusters = 1;
  double seed = coords.front();
  for (double c : coords) {
    if (c - seed > tolerance) {
      ++clusters;
      seed = c;
    }
  }
  return clusters;
}

inline double alignment(const LayoutDocument& doc) {
  const auto ls = leaves(doc);
  const std::size_t n = ls.size();
  if (n <= 1) return 1.0;
  std::array<std::vector<double>, 6> guides;
  for (auto& g : guides) g.reserve(n);
  for (const Element* e : ls) {
    const Rect& r = e->bounds;
    guides[0].push_back(static_cast<double>(r.x));
    guides[1].push_back(static_cast<double>(r.x) + static_cast<double>(r.w) / 2.0);
    guides[2].push_back(static_cast<double>(r.right()));
    guides[3].push_back(static_cast<double>(r.y));
    guides[4].push_back(static_cast<double>(r.y) + static_cast<double>(r.h) / 2.0);
    guides[5].push_back(static_cast<double>(r.bottom()));
  }
  std::size_t lines = 0;
  for (auto& g : guides) lines += count_guide_clusters(std::move(g), kAlignTolerancePx);
  const double excess = static_cast<double>(lines) - 6.0;
  const double span = 6.0 * static_cast<double>(n) - 6.0;
  return std::clamp(1.0 - excess / span, 0.0, 1.0);
}

// Quantized color bucket (4 bits per channel) -> accumulated weight.
// Fill contributes the leaf area; text color contributes 0.2 x area.
inline std::map<std::uint16_t, double> color_weight_table(const LayoutDocument& doc) {
  std::map<std::uint16_t, double> table;
  auto bucket = [](Rgb c) {
    return static_cast<std::uint16_t>(((c.r >> 4) << 8) | ((c.g >> 4) << 4) | (c.b >> 4));
  };
  for (const Element* e : leaves(doc)) {
    const double a = e->bounds.area();
    if (e->fill_color) table[bucket(*e->fill_color)] += a;
    if (e->text_style) table[bucket(e->text_style->color)] += kTextColorWeight * a;
  }
  return table;
}

inline double color_unity(const LayoutDocument& doc) {
  const auto table = color_weight_table(doc);
  double total = 0.0;
  for (const auto& [_, w] : table) total += w;
  if (table.empty() || total <= 0.0) return 1.0;
  double dominant = 0.0;
  for (const auto& [_, w] : table) {
    if (w * kDominantDivisor >= total) dominant += w;
  }
  return std::clamp(dominant / total, 0.0, 1.0);
}

inline double font_unity(const LayoutDocument& doc) {
  std::set<std::pair<std::string, double>> pairs;
  std::size_t text_leaves = 0;
  for (const Element* e : leaves(doc)) {
    if (!e->text_style) continue;
    ++text_leaves;
    pairs.emplace(e->text_style->font_family, e->text_style->font_size);
  }
  if (text_leaves <= 1) return 1.0;
  const double p = static_cast<double>(pairs.size());
  const double t = static_cast<double>(text_leaves);
  return std::clamp(1.0 - (p - 1.0) / (t - 1.0), 0.0, 1.0);
}

inline double element_size(const LayoutDocument& doc) {
  const auto ls = leaves(doc);
  if (ls.empty()) return 0.5;
  const double s = kLogicalCanvasWidth / static_cast<double>(doc.canvas_width);
  double sum = 0.0;
  for (const Element* e : ls) sum += e->bounds.area() * s * s;
  const double mean = sum / static_cast<double>(ls.size());
  return mean / (mean + kTouchTargetArea);
}

// Exact area of a union of rectangles by coordinate compression over x and
// interval merging over y within each slab.
inline double union_area(const std::vector<Rect>& rects) {
  std::vector<std::int64_t> xs;
  xs.reserve(rects.size() * 2);
  for (const Rect& r : rects) {
    if (r.w <= 0 || r.h <= 0) continue;
    xs.push_back(r.x);
    xs.push_back(r.right());
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double total = 0.0;
  std::vector<std::pair<std::int64_t, std::int64_t>> spans;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const std::int64_t x0 = xs[i], x1 = xs[i + 1];
    spans.clear();
    for (const Rect& r : rects) {
      if (r.w <= 0 || r.h <= 0) continue;
      if (r.x <= x0 && r.right() >= x1) spans.emplace_back(r.y, r.bottom());
    }
    if (spans.empty()) continue;
    std::sort(spans.begin(), spans.end());
    std::int64_t covered = 0;
    std::int64_t cur0 = spans[0].first, cur1 = spans[0].second;
    for (std::size_t k = 1; k < spans.size(); ++k) {
      if (spans[k].first > cur1) {
        covered += cur1 - cur0;
        cur0 = spans[k].first;
        cur1 = spans[k].second;
      } else {
        cur1 = std::max(cur1, spans[k].second);
      }
    }
    covered += cur1 - cur0;
    total += static_cast<double>(covered) * static_cast<double>(x1 - x0);
  }
  return total;
}

inline double density(const LayoutDocument& doc) {
  std::vector<Rect> rects;
  for (const Element* e : leaves(doc)) rects.push_back(e->bounds);
  const double canvas =
      static_cast<double>(doc.canvas_width) * static_cast<double>(doc.canvas_height);
  return std::clamp(union_area(rects) / canvas, 0.0, 1.0);
}

// Maps a raw score to goodness in [0,1] (1 = at the metric's best value).
inline double goodness(Metric m, double score) {
  return midpoint_is_best(m) ? 1.0 - 2.0 * std::abs(score - 0.5) : score;
}

inline double overall_rating(const MetricReport& r) {
  double sum = 0.0;
  for (auto m : kAllMetrics) sum += goodness(m, r.get(m));
  return std::clamp(sum / 6.0, 0.0, 1.0);
}

}  // namespace metrics

inline MetricReport evaluate(const LayoutDocument& doc) {
  MetricReport r;
  r.element_balance = metrics::element_balance(doc);
  r.alignment = metrics::alignment(doc);
  r.color_unity = metrics::color_unity(doc);
  r.font_unity = metrics::font_unity(doc);
  r.element_size = metrics::element_size(doc);
  r.density = metrics::density(doc);
  r.overall = metrics::overall_rating(r);
  return r;
}

inline double round_to(double v, int places) {
  const double s = std::pow(10.0, places);
  return std::round(v * s) / s;
}

// Wire form: seven fixed keys, 4 decimal places.
inline nlohmann::json to_json(const MetricReport& r) {
  nlohmann::json j;
  for (auto m : kAllMetrics) j[std::string(to_string(m))] = round_to(r.get(m), 4);
  j["overall"] = round_to(r.overall, 4);
  return j;
}

}  // namespace guicomp
