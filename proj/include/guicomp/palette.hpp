#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "guicomp/errors.hpp"
#include "guicomp/layout.hpp"
#include "guicomp/metrics.hpp"

namespace guicomp {

struct ColorSwatch {
  Rgb rgb;
  double weight = 0.0;  // share of total colored weight

  friend bool operator==(const ColorSwatch&, const ColorSwatch&) = default;
};

namespace palette {

inline constexpr std::uint32_t kSeed = 42;
inline constexpr int kIterations = 20;

struct WeightedColor {
  std::array<double, 3> rgb;
  double weight;
};

// Distinct exact colors with accumulated weight, in ascending RGB order.
// Weighting matches the color-unity table: fill = area, text = 0.2 x area.
inline std::vector<WeightedColor> weighted_colors(const LayoutDocument& doc) {
  std::map<Rgb, double> acc;
  for (const Element* e : leaves(doc)) {
    const double a = e->bounds.area();
    if (e->fill_color) acc[*e->fill_color] += a;
    if (e->text_style) acc[e->text_style->color] += metrics::kTextColorWeight * a;
  }
  std::vector<WeightedColor> out;
  for (const auto& [c, w] : acc) {
    if (w > 0.0) out.push_back({{double(c.r), double(c.g), double(c.b)}, w});
  }
  return out;
}

inline double unit_uniform(std::mt19937& rng) {
  return static_cast<double>(rng() >> 8) * (1.0 / 16777216.0);
}

inline double sq_dist(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  const double dr = a[0] - b[0], dg = a[1] - b[1], db = a[2] - b[2];
  return dr * dr + dg * dg + db * db;
}

}  // namespace palette

// Area-weighted k-means over leaf colors (k-means++ seeding, seed 42,
// 20 Lloyd iterations). Swatches come back ordered by descending weight.
inline std::vector<ColorSwatch> dominant_palette(const LayoutDocument& doc, std::size_t k) {
  using namespace palette;
  if (k == 0) throw ArgumentError("dominant_palette: k must be >= 1");
  const auto pts = weighted_colors(doc);
  if (pts.empty()) return {};
  double total = 0.0;
  for (const auto& p : pts) total += p.weight;

  std::vector<std::array<double, 3>> centers;
  if (pts.size() <= k) {
    for (const auto& p : pts) centers.push_back(p.rgb);
  } else {
    std::mt19937 rng(kSeed);
    // Weighted k-means++: the first center is drawn by weight, later ones by
    // weight x squared distance to the nearest chosen center.
    auto draw = [&](const std::vector<double>& mass) {
      double sum = 0.0;
      for (double m : mass) sum += m;
      double u = unit_uniform(rng) * sum;
      for (std::size_t i = 0; i < mass.size(); ++i) {
        if (u < mass[i]) return i;
        u -= mass[i];
      }
      for (std::size_t i = mass.size(); i-- > 0;)
        if (mass[i] > 0.0) return i;
      return std::size_t{0};
    };
    std::vector<double> mass(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) mass[i] = pts[i].weight;
    centers.push_back(pts[draw(mass)].rgb);
    while (centers.size() < k) {
      for (std::size_t i = 0; i < pts.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : centers) best = std::min(best, sq_dist(pts[i].rgb, c));
        mass[i] = pts[i].weight * best;
      }
      centers.push_back(pts[draw(mass)].rgb);
    }
  }

  std::vector<std::size_t> assign(pts.size(), 0);
  auto assign_all = [&] {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d = sq_dist(pts[i].rgb, centers[c]);
        if (d < best) {
          best = d;
          assign[i] = c;
        }
      }
    }
  };
  for (int it = 0; it < kIterations; ++it) {
    assign_all();
    std::vector<std::array<double, 3>> sum(centers.size(), {0, 0, 0});
    std::vector<double> w(centers.size(), 0.0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (int ch = 0; ch < 3; ++ch) sum[assign[i]][ch] += pts[i].weight * pts[i].rgb[ch];
      w[assign[i]] += pts[i].weight;
    }
    // An emptied cluster keeps its previous center.
    for (std::size_t c = 0; c < centers.size(); ++c) {
      if (w[c] > 0.0)
        for (int ch = 0; ch < 3; ++ch) centers[c][ch] = sum[c][ch] / w[c];
    }
  }
  assign_all();

  std::vector<double> cw(centers.size(), 0.0);
  for (std::size_t i = 0; i < pts.size(); ++i) cw[assign[i]] += pts[i].weight;
  std::vector<ColorSwatch> out;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    if (cw[c] <= 0.0) continue;
    auto channel = [](double v) {
      return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
    };
    out.push_back({Rgb{channel(centers[c][0]), channel(centers[c][1]), channel(centers[c][2])},
                   cw[c] / total});
  }
  std::sort(out.begin(), out.end(), [](const ColorSwatch& a, const ColorSwatch& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.rgb < b.rgb;
  });
  return out;
}

inline nlohmann::json to_json(const ColorSwatch& s) {
  return {{"rgb", {s.rgb.r, s.rgb.g, s.rgb.b}}, {"hex", to_hex(s.rgb)}, {"weight", s.weight}};
}

inline nlohmann::json to_json(const std::vector<ColorSwatch>& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : p) arr.push_back(to_json(s));
  return arr;
}

}  // namespace guicomp
