#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "support.hpp"

using namespace guicomp;
using namespace testing_support;

namespace {

class FailingModel final : public AttentionModel {
 public:
  std::string name() const override { return "failing"; }
  AttentionMap predict(const LayoutDocument&) const override { throw std::runtime_error("weights missing"); }
};

class WrongShapeModel final : public AttentionModel {
 public:
  std::string name() const override { return "tiny"; }
  AttentionMap predict(const LayoutDocument&) const override { return AttentionMap{2, 2, {0, 0, 0, 0}}; }
};

std::uint8_t map_max(const AttentionMap& m) { return *std::max_element(m.values.begin(), m.values.end()); }

double hue_degrees(Rgb c) {
  const double r = c.r, g = c.g, b = c.b;
  const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
  if (mx == mn) return 0.0;
  double h;
  if (mx == r) h = 60.0 * std::fmod((g - b) / (mx - mn), 6.0);
  else if (mx == g) h = 60.0 * ((b - r) / (mx - mn) + 2.0);
  else h = 60.0 * ((r - g) / (mx - mn) + 4.0);
  return h < 0 ? h + 360.0 : h;
}

// Exact per-cell coverage for pixel-aligned leaves: the union is a set of
// unit pixels, so its area inside a cell is the sum of pixel/cell overlaps.
std::vector<double> raster_oracle(const LayoutDocument& doc) {
  const auto cw = doc.canvas_width, ch = doc.canvas_height;
  std::vector<double> out(kRasterSize, 0.0);
  for (std::size_t channel = 0; channel < 3; ++channel) {
    std::vector<char> px(static_cast<std::size_t>(cw * ch), 0);
    for (const Element* e : leaves(doc)) {
      if (static_cast<std::size_t>(channel_of(e->kind)) != channel) continue;
      for (auto y = e->bounds.y; y < e->bounds.bottom(); ++y)
        for (auto x = e->bounds.x; x < e->bounds.right(); ++x) px[static_cast<std::size_t>(y * cw + x)] = 1;
    }
    const double sx = double(cw) / 50.0, sy = double(ch) / 90.0;
    for (std::int64_t y = 0; y < ch; ++y) {
      for (std::int64_t x = 0; x < cw; ++x) {
        if (!px[static_cast<std::size_t>(y * cw + x)]) continue;
        const auto c0 = static_cast<std::size_t>(std::floor(x / sx)), r0 = static_cast<std::size_t>(std::floor(y / sy));
        for (std::size_t r = r0; r <= std::min<std::size_t>(89, r0 + 1); ++r) {
          const double oy = std::min<double>(y + 1, (r + 1) * sy) - std::max<double>(y, r * sy);
          if (oy <= 0) continue;
          for (std::size_t c = c0; c <= std::min<std::size_t>(49, c0 + 1); ++c) {
            const double ox = std::min<double>(x + 1, (c + 1) * sx) - std::max<double>(x, c * sx);
            if (ox > 0) out[(r * 50 + c) * 3 + channel] += ox * oy / (sx * sy);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

TEST(Palette, NoColorsGivesEmptyPalette) {
  EXPECT_TRUE(dominant_palette(doc_of({leaf("a", ElementKind::shape, 0, 0, 10, 10)}), 5).empty());
}

TEST(Palette, SingleColor) {
  const auto p = dominant_palette(doc_of({leaf("a", ElementKind::shape, 0, 0, 10, 10, Rgb{255, 0, 0}),
                                          leaf("b", ElementKind::shape, 20, 0, 10, 30, Rgb{255, 0, 0})}),
                                  5);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].rgb, (Rgb{255, 0, 0}));
  EXPECT_DOUBLE_EQ(p[0].weight, 1.0);
}

TEST(Palette, ThreeToOneAreaRatio) {
  const auto p = dominant_palette(doc_of({leaf("a", ElementKind::shape, 0, 0, 30, 10, Rgb{0, 128, 0}),
                                          leaf("b", ElementKind::shape, 0, 20, 10, 10, Rgb{0, 0, 200})}),
                                  2);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0].rgb, (Rgb{0, 128, 0}));
  EXPECT_DOUBLE_EQ(p[0].weight, 0.75);
  EXPECT_EQ(p[1].rgb, (Rgb{0, 0, 200}));
  EXPECT_DOUBLE_EQ(p[1].weight, 0.25);
}

TEST(Palette, KZeroIsAnArgumentError) { EXPECT_THROW(dominant_palette(doc_of({}), 0), ArgumentError); }

TEST(Palette, SingleClusterIsTheWeightedMean) {
  const auto p = dominant_palette(doc_of({leaf("a", ElementKind::shape, 0, 0, 30, 10, Rgb{200, 0, 0}),
                                          leaf("b", ElementKind::shape, 0, 20, 10, 10, Rgb{0, 0, 100})}),
                                  1);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].rgb, (Rgb{150, 0, 25}));
  EXPECT_DOUBLE_EQ(p[0].weight, 1.0);
}

TEST(Palette, WeightsSumToOneAndAreDeterministic) {
  synth::Rng rng(17);
  for (int t = 0; t < 200; ++t) {
    const auto doc = t % 2 ? synth::synthesize_layout(rng, "a") : synth::random_layout(rng, 30);
    const auto p = dominant_palette(doc, 5);
    if (p.empty()) continue;
    EXPECT_LE(p.size(), 5u);
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      sum += p[i].weight;
      if (i > 0) EXPECT_GE(p[i - 1].weight, p[i].weight);
    }
    EXPECT_NEAR(sum, 1.0, 1e-6);
    const auto again = dominant_palette(doc, 5);
    ASSERT_EQ(again.size(), p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      EXPECT_EQ(again[i].rgb, p[i].rgb);
      EXPECT_EQ(again[i].weight, p[i].weight);
    }
  }
}

TEST(Colormap, Anchors) {
  EXPECT_EQ(heat_color(0), (Rgb{0, 0, 255}));
  EXPECT_EQ(heat_color(85), (Rgb{0, 255, 0}));
  EXPECT_EQ(heat_color(170), (Rgb{255, 255, 0}));
  EXPECT_EQ(heat_color(255), (Rgb{255, 0, 0}));
  EXPECT_EQ(heat_color(128), (Rgb{129, 255, 0}));
}

TEST(Colormap, HueMovesMonotonicallyTowardRed) {
  // Blue sits at 240 degrees and red at 0; hue must never increase.
  double prev = hue_degrees(heat_color(0));
  for (int v = 1; v <= 255; ++v) {
    const double h = hue_degrees(heat_color(static_cast<std::uint8_t>(v)));
    EXPECT_LE(h, prev + 1e-9) << "value " << v;
    prev = h;
  }
}

TEST(Colormap, PngRoundTrip) {
  AttentionMap m{50, 90, std::vector<std::uint8_t>(50 * 90)};
  for (std::size_t i = 0; i < m.values.size(); ++i) m.values[i] = static_cast<std::uint8_t>(i % 256);
  const auto png = decode_png(render_heatmap_png(m));
  ASSERT_EQ(png.width, 50u);
  ASSERT_EQ(png.height, 90u);
  for (std::uint32_t y = 0; y < 90; ++y) {
    for (std::uint32_t x = 0; x < 50; ++x) {
      const Rgb c = heat_color(m.at(x, y));
      const auto* p = png.at(x, y);
      ASSERT_EQ(p[0], c.r);
      ASSERT_EQ(p[1], c.g);
      ASSERT_EQ(p[2], c.b);
    }
  }
}

TEST(Attention, EmptyLayoutIsAllZero) {
  const auto m = attention_map(doc_of({}), BaselineSaliencyModel{});
  EXPECT_EQ(m.width, 50u);
  EXPECT_EQ(m.height, 90u);
  EXPECT_EQ(map_max(m), 0);
}

TEST(Attention, SingleElementPeaksInsideItsFootprint) {
  const auto doc = doc_of({leaf("a", ElementKind::image, 72, 128, 72, 128)});
  const auto m = attention_map(doc, BaselineSaliencyModel{});
  EXPECT_EQ(map_max(m), 255);
  // Footprint is cols 10..19, rows 18..35.
  for (std::size_t r = 0; r < 90; ++r)
    for (std::size_t c = 0; c < 50; ++c)
      if (m.at(c, r) == 255) {
        EXPECT_GE(c, 10u);
        EXPECT_LT(c, 20u);
        EXPECT_GE(r, 18u);
        EXPECT_LT(r, 36u);
      }
}

TEST(Attention, TopImageOutranksBottomImage) {
  const auto doc = doc_of({leaf("top", ElementKind::image, 130, 20, 100, 100),
                           leaf("bottom", ElementKind::image, 130, 520, 100, 100)});
  const auto m = attention_map(doc, BaselineSaliencyModel{});
  std::uint8_t top = 0, bottom = 0;
  for (std::size_t r = 0; r < 90; ++r)
    for (std::size_t c = 0; c < 50; ++c) (r < 45 ? top : bottom) = std::max(r < 45 ? top : bottom, m.at(c, r));
  EXPECT_EQ(top, 255);
  EXPECT_GE(top, bottom);
  EXPECT_LT(bottom, 255);
}

TEST(Attention, FullCanvasImageIsUniform) {
  const auto m = attention_map(doc_of({leaf("a", ElementKind::image, 0, 0, 360, 640)}), BaselineSaliencyModel{});
  for (std::size_t r = 8; r < 82; ++r)
    for (std::size_t c = 8; c < 42; ++c) EXPECT_NEAR(m.at(c, r), 255, 1);
}

TEST(Attention, KindWeights) {
  SaliencyWeights w;
  EXPECT_DOUBLE_EQ(saliency::kind_weight(leaf("a", ElementKind::icon, 0, 0, 1, 1), w), 1.0);
  EXPECT_DOUBLE_EQ(saliency::kind_weight(leaf("a", ElementKind::pagination, 0, 0, 1, 1), w), 0.8);
  EXPECT_DOUBLE_EQ(saliency::kind_weight(leaf("a", ElementKind::container, 0, 0, 1, 1), w), 0.4);
  EXPECT_DOUBLE_EQ(saliency::kind_weight(text_leaf("t", 0, 0, 1, 1, "A", 12), w), 0.45);
  EXPECT_DOUBLE_EQ(saliency::kind_weight(text_leaf("t", 0, 0, 1, 1, "A", 48), w), 0.9);
}

TEST(Attention, InvariantsOnRandomLayouts) {
  synth::Rng rng(2024);
  const BaselineSaliencyModel model;
  for (int t = 0; t < 300; ++t) {
    const auto doc = synth::random_layout(rng, static_cast<std::size_t>(rng.between(0, 40)));
    const auto m = attention_map(doc, model);
    ASSERT_EQ(m.values.size(), 50u * 90u);
    EXPECT_EQ(map_max(m), leaves(doc).empty() ? 0 : 255);
    EXPECT_EQ(attention_map(doc, model).values, m.values);
  }
}

TEST(Attention, ZeroAreaLeafStillReachesPeak) {
  const auto m = attention_map(doc_of({leaf("dot", ElementKind::shape, 100, 100, 0, 0)}), BaselineSaliencyModel{});
  EXPECT_EQ(map_max(m), 255);
}

TEST(Attention, ModelFailuresBecomeAttentionUnavailable) {
  const auto doc = doc_of({leaf("a", ElementKind::image, 0, 0, 10, 10)});
  try {
    attention_map(doc, FailingModel{});
    FAIL();
  } catch (const AttentionUnavailable& e) {
    EXPECT_EQ(e.code(), "attention_unavailable");
    EXPECT_NE(std::string(e.what()).find("weights missing"), std::string::npos);
  }
  EXPECT_THROW(attention_map(doc, WrongShapeModel{}), AttentionUnavailable);
}

TEST(Attention, JsonCarriesBase64Bytes) {
  const auto m = attention_map(doc_of({leaf("a", ElementKind::image, 0, 0, 100, 100)}), BaselineSaliencyModel{});
  const auto j = to_json(m);
  EXPECT_EQ(j.at("width"), 50);
  EXPECT_EQ(j.at("height"), 90);
  const auto bytes = base64_decode(j.at("values").get<std::string>());
  ASSERT_TRUE(bytes);
  ASSERT_EQ(bytes->size(), m.values.size());
  EXPECT_TRUE(std::equal(m.values.begin(), m.values.end(), reinterpret_cast<const std::uint8_t*>(bytes->data())));
}

TEST(Base64, KnownVectors) {
  EXPECT_EQ(base64_encode(""), "");
  EXPECT_EQ(base64_encode("f"), "Zg==");
  EXPECT_EQ(base64_encode("fo"), "Zm8=");
  EXPECT_EQ(base64_encode("foobar"), "Zm9vYmFy");
  EXPECT_EQ(base64_decode("Zm9vYg==").value(), "foob");
  EXPECT_FALSE(base64_decode("Zm9"));
  EXPECT_FALSE(base64_decode("Zm9v!A=="));
}

TEST(Raster, EmptyLayoutIsZero) {
  const auto r = rasterize(doc_of({}));
  EXPECT_EQ(r.values.size(), 13500u);
  EXPECT_TRUE(std::all_of(r.values.begin(), r.values.end(), [](float v) { return v == 0.0f; }));
}

TEST(Raster, FullCanvasImage) {
  const auto r = rasterize(doc_of({leaf("a", ElementKind::image, 0, 0, 360, 640)}));
  for (std::size_t row = 0; row < 90; ++row)
    for (std::size_t col = 0; col < 50; ++col) {
      EXPECT_EQ(r.at(row, col, 0), 0.0f);
      EXPECT_EQ(r.at(row, col, 1), 1.0f);
      EXPECT_EQ(r.at(row, col, 2), 0.0f);
    }
}

TEST(Raster, TopHalfText) {
  const auto r = rasterize(doc_of({leaf("t", ElementKind::text, 0, 0, 360, 320)}));
  for (std::size_t row = 0; row < 90; ++row)
    for (std::size_t col = 0; col < 50; ++col) {
      EXPECT_EQ(r.at(row, col, 0), row < 45 ? 1.0f : 0.0f) << row << "," << col;
      EXPECT_EQ(r.at(row, col, 1), 0.0f);
      EXPECT_EQ(r.at(row, col, 2), 0.0f);
    }
}

TEST(Raster, OverlapIsUnionNotSum) {
  const auto r = rasterize(doc_of({leaf("a", ElementKind::button, 0, 0, 360, 640),
                                   leaf("b", ElementKind::shape, 0, 0, 360, 640)}));
  EXPECT_EQ(r.at(10, 10, 2), 1.0f);
}

TEST(Raster, MatchesPixelOracle) {
  synth::Rng rng(55);
  for (int t = 0; t < 20; ++t) {
    const auto doc = synth::random_layout(rng, static_cast<std::size_t>(rng.between(1, 20)));
    const auto r = rasterize(doc);
    const auto oracle = raster_oracle(doc);
    for (std::size_t i = 0; i < kRasterSize; ++i) {
      ASSERT_NEAR(r.values[i], oracle[i], 1e-5) << "index " << i;
      ASSERT_GE(r.values[i], 0.0f);
      ASSERT_LE(r.values[i], 1.0f);
    }
  }
}
