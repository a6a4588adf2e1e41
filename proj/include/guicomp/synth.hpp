#pragma once

// Seeded generators: plausible mobile screens for a desk-scale template
// corpus, and unstructured random layouts for property tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "guicomp/corpus.hpp"
#include "guicomp/layout.hpp"

namespace guicomp::synth {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0); }
  // Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool chance(double p) { return uniform() < p; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(between(0, static_cast<std::int64_t>(v.size()) - 1))];
  }

 private:
  std::mt19937_64 engine_;
};

inline const std::vector<std::string>& categories() {
  static const std::vector<std::string> c{"news",   "shopping", "social", "travel",
                                          "game",   "education", "finance", "health"};
  return c;
}

namespace detail {

inline const std::vector<std::string>& font_families() {
  static const std::vector<std::string> f{"Roboto", "Noto Sans", "Open Sans", "Lato"};
  return f;
}

struct Theme {
  Rgb primary, accent, surface, background, text, muted;
  std::string font;
  std::string alt_font;
};

inline Rgb jitter(Rng& rng, Rgb c, int amount) {
  auto j = [&](std::uint8_t v) {
    return static_cast<std::uint8_t>(std::clamp<std::int64_t>(v + rng.between(-amount, amount), 0, 255));
  };
  return {j(c.r), j(c.g), j(c.b)};
}

inline Theme make_theme(Rng& rng) {
  static const std::vector<Rgb> primaries{{33, 150, 243}, {233, 30, 99}, {76, 175, 80},
                                          {255, 152, 0},  {103, 58, 183}, {0, 150, 136},
                                          {244, 67, 54},  {63, 81, 181}};
  Theme t;
  t.primary = jitter(rng, rng.pick(primaries), 12);
  t.accent = jitter(rng, rng.pick(primaries), 12);
  const bool dark = rng.chance(0.2);
  t.background = dark ? Rgb{30, 30, 30} : Rgb{250, 250, 250};
  t.surface = dark ? Rgb{48, 48, 48} : Rgb{255, 255, 255};
  t.text = dark ? Rgb{240, 240, 240} : Rgb{33, 33, 33};
  t.muted = dark ? Rgb{170, 170, 170} : Rgb{117, 117, 117};
  t.font = rng.pick(font_families());
  t.alt_font = rng.chance(0.3) ? rng.pick(font_families()) : t.font;
  return t;
}

class Builder {
 public:
  Builder(Rng& rng, Theme theme, std::int64_t w, std::int64_t h)
      : rng_(rng), theme_(std::move(theme)), w_(w), h_(h) {}

  // Small placement noise so that not every screen is perfectly aligned.
  std::int64_t wobble() { return rng_.chance(0.25) ? rng_.between(-6, 6) : 0; }

  Element make(ElementKind kind, Rect r) {
    Element e;
    e.id = "e" + std::to_string(next_++);
    e.kind = kind;
    clamp(r);
    e.bounds = r;
    return e;
  }

  Element text(Rect r, std::string content, double size, bool alt = false, bool muted = false) {
    Element e = make(ElementKind::text, r);
    e.text_style = TextStyle{std::move(content), alt ? theme_.alt_font : theme_.font, size,
                             muted ? theme_.muted : theme_.text};
    return e;
  }

  Element button(Rect r, std::string label) {
    Element e = make(ElementKind::button, r);
    e.fill_color = theme_.primary;
    e.text_style = TextStyle{std::move(label), theme_.font, 14.0, Rgb{255, 255, 255}};
    return e;
  }

  Element image(Rect r) {
    Element e = make(ElementKind::image, r);
    e.fill_color = jitter(rng_, theme_.muted, 40);
    return e;
  }

  Element icon(Rect r) {
    Element e = make(ElementKind::icon, r);
    e.fill_color = theme_.accent;
    return e;
  }

  Element app_bar(const std::string& title) {
    Element bar = make(ElementKind::container, {0, 0, w_, 56});
    bar.fill_color = theme_.primary;
    bar.children.push_back(icon({16, 16, 24, 24}));
    bar.children.push_back(text({56, 16, 200, 24}, title, 20.0));
    if (rng_.chance(0.6)) bar.children.push_back(icon({w_ - 40, 16, 24, 24}));
    return bar;
  }

  Element bottom_nav(int items) {
    Element nav = make(ElementKind::container, {0, h_ - 56, w_, 56});
    nav.fill_color = theme_.surface;
    const std::int64_t slot = w_ / items;
    for (int i = 0; i < items; ++i)
      nav.children.push_back(icon({i * slot + slot / 2 - 12, h_ - 44, 24, 24}));
    return nav;
  }

  Element pagination(std::int64_t y) {
    Element e = make(ElementKind::pagination, {w_ / 2 - 30, y, 60, 12});
    e.fill_color = theme_.accent;
    return e;
  }

  Rng& rng() { return rng_; }
  const Theme& theme() const { return theme_; }
  std::int64_t width() const { return w_; }
  std::int64_t height() const { return h_; }

 private:
  void clamp(Rect& r) const {
    r.w = std::max<std::int64_t>(r.w, 0);
    r.h = std::max<std::int64_t>(r.h, 0);
    const std::int64_t x0 = std::clamp<std::int64_t>(r.x, 0, w_);
    const std::int64_t y0 = std::clamp<std::int64_t>(r.y, 0, h_);
    const std::int64_t x1 = std::clamp<std::int64_t>(r.x + r.w, x0, w_);
    const std::int64_t y1 = std::clamp<std::int64_t>(r.y + r.h, y0, h_);
    r = {x0, y0, x1 - x0, y1 - y0};
  }

  Rng& rng_;
  Theme theme_;
  std::int64_t w_, h_;
  std::size_t next_ = 0;
};

inline void list_screen(Builder& b, std::vector<Element>& out) {
  out.push_back(b.app_bar("Inbox"));
  std::int64_t y = 64;
  const std::int64_t row = b.rng().chance(0.5) ? 72 : 88;
  const std::int64_t bottom = b.height() - (b.rng().chance(0.5) ? 64 : 8);
  while (y + row <= bottom) {
    Element card = b.make(ElementKind::container, {0, y, b.width(), row});
    card.fill_color = b.theme().surface;
    const std::int64_t d = b.wobble();
    card.children.push_back(b.image({8 + d, y + 8, row - 16, row - 16}));
    card.children.push_back(b.text({row + d, y + 12, b.width() - row - 16, 20}, "Title", 16.0));
    card.children.push_back(
        b.text({row + b.wobble(), y + 38, b.width() - row - 16, 16}, "Subtitle", 12.0, true, true));
    out.push_back(std::move(card));
    y += row;
  }
  if (bottom < b.height() - 8) out.push_back(b.bottom_nav(static_cast<int>(b.rng().between(3, 5))));
}

inline void grid_screen(Builder& b, std::vector<Element>& out) {
  out.push_back(b.app_bar("Gallery"));
  const std::int64_t cols = b.rng().between(2, 3);
  const std::int64_t gap = 8;
  const std::int64_t cell = (b.width() - gap * (cols + 1)) / cols;
  const bool captions = b.rng().chance(0.6);
  const std::int64_t step = cell + (captions ? 28 : 0) + gap;
  for (std::int64_t y = 64; y + step <= b.height(); y += step) {
    for (std::int64_t c = 0; c < cols; ++c) {
      const std::int64_t x = gap + c * (cell + gap) + b.wobble();
      out.push_back(b.image({x, y, cell, cell}));
      if (captions) out.push_back(b.text({x, y + cell + 4, cell, 20}, "Item", 14.0));
    }
  }
}

inline void form_screen(Builder& b, std::vector<Element>& out) {
  const std::int64_t margin = b.rng().pick(std::vector<std::int64_t>{16, 24, 32});
  const std::int64_t w = b.width() - 2 * margin;
  std::int64_t y = b.rng().between(60, 140);
  if (b.rng().chance(0.6)) {
    out.push_back(b.image({b.width() / 2 - 40, y, 80, 80}));
    y += 100;
  }
  out.push_back(b.text({margin, y, w, 32}, "Sign in", 24.0));
  y += 48;
  const auto fields = b.rng().between(2, 5);
  for (std::int64_t i = 0; i < fields; ++i) {
    Element f = b.make(ElementKind::edit_text, {margin + b.wobble(), y, w, 48});
    f.fill_color = b.theme().surface;
    f.text_style = TextStyle{"Field", b.theme().font, 14.0, b.theme().muted};
    out.push_back(std::move(f));
    y += 60;
  }
  out.push_back(b.button({margin, y + 8, w, 48}, "Continue"));
  if (b.rng().chance(0.5)) out.push_back(b.text({margin, y + 72, w, 20}, "Forgot password?", 12.0, true, true));
}

inline void hero_screen(Builder& b, std::vector<Element>& out) {
  const std::int64_t hero_h = b.rng().between(200, 320);
  out.push_back(b.image({0, 0, b.width(), hero_h}));
  std::int64_t y = hero_h + 16;
  out.push_back(b.text({16, y, b.width() - 32, 32}, "Discover", 24.0));
  y += 44;
  const auto paras = b.rng().between(1, 3);
  for (std::int64_t i = 0; i < paras; ++i) {
    out.push_back(b.text({16 + b.wobble(), y, b.width() - 32, 40}, "Body copy", 14.0, true, true));
    y += 48;
  }
  if (b.rng().chance(0.7)) out.push_back(b.pagination(y + 4));
  const std::int64_t by = b.height() - 72;
  if (b.rng().chance(0.5)) {
    out.push_back(b.button({16, by, (b.width() - 48) / 2, 48}, "Skip"));
    out.push_back(b.button({32 + (b.width() - 48) / 2, by, (b.width() - 48) / 2, 48}, "Next"));
  } else {
    out.push_back(b.button({16, by, b.width() - 32, 48}, "Get started"));
  }
}

inline void dashboard_screen(Builder& b, std::vector<Element>& out) {
  out.push_back(b.app_bar("Overview"));
  std::int64_t y = 72;
  const auto cards = b.rng().between(2, 4);
  for (std::int64_t i = 0; i < cards && y < b.height() - 120; ++i) {
    const std::int64_t h = b.rng().between(96, 160);
    Element card = b.make(ElementKind::container, {12, y, b.width() - 24, h});
    card.fill_color = b.theme().surface;
    card.children.push_back(b.icon({28, y + 16, 32, 32}));
    card.children.push_back(b.text({72, y + 16, 200, 24}, "Metric", 18.0));
    card.children.push_back(b.text({72, y + 44, 120, 32}, "1,024", 28.0, true));
    if (b.rng().chance(0.5)) {
      Element bar = b.make(ElementKind::shape, {28, y + h - 24, b.width() - 56, 8});
      bar.fill_color = b.theme().accent;
      card.children.push_back(std::move(bar));
    }
    out.push_back(std::move(card));
    y += h + 12;
  }
  out.push_back(b.bottom_nav(4));
}

}  // namespace detail

// One plausible screen with app metadata. Canvas is 360 x 640.
inline LayoutDocument synthesize_layout(Rng& rng, const std::string& app_id) {
  detail::Builder b(rng, detail::make_theme(rng), 360, 640);
  LayoutDocument doc;
  doc.canvas_width = b.width();
  doc.canvas_height = b.height();
  std::vector<Element> content;
  switch (rng.between(0, 4)) {
    case 0: detail::list_screen(b, content); break;
    case 1: detail::grid_screen(b, content); break;
    case 2: detail::form_screen(b, content); break;
    case 3: detail::hero_screen(b, content); break;
    default: detail::dashboard_screen(b, content); break;
  }
  Element root = b.make(ElementKind::container, {0, 0, b.width(), b.height()});
  root.fill_color = b.theme().background;
  for (auto& c : content) root.children.push_back(std::move(c));
  doc.elements.push_back(std::move(root));
  const double rating = std::round((2.5 + 2.5 * rng.uniform()) * 10.0) / 10.0;
  doc.meta = AppMeta{app_id, rng.pick(categories()), std::min(rating, 5.0)};
  return doc;
}

struct NamedLayout {
  std::string id;
  LayoutDocument doc;
};

inline std::vector<NamedLayout> synthesize_layouts(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<NamedLayout> out;
  out.reserve(count);
  const std::size_t width = std::to_string(count).size();
  for (std::size_t i = 0; i < count; ++i) {
    std::string num = std::to_string(i);
    num.insert(0, width > num.size() ? width - num.size() : 0, '0');
    // Several screens per app, as in real corpora.
    const std::string app = "app" + std::to_string(i / 3);
    out.push_back({"screen_" + num, synthesize_layout(rng, app)});
  }
  return out;
}

inline Corpus synthesize_corpus(std::size_t count, std::uint64_t seed) {
  std::vector<CorpusEntry> entries;
  for (auto& l : synthesize_layouts(count, seed)) entries.push_back(make_entry(l.id, std::move(l.doc)));
  return Corpus(std::move(entries), EmbeddingMode::fallback);
}

// Writes `count` schema-v1 files into `dir` (created if missing).
inline void write_synthetic_corpus(const std::filesystem::path& dir, std::size_t count,
                                   std::uint64_t seed) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  for (const auto& l : synthesize_layouts(count, seed))
    write_file(dir / (l.id + ".json"), layout_to_json(l.doc).dump(2));
}

// Unstructured layout of `n_leaves` random in-canvas leaves, some grouped
// under containers. Used by property tests and latency benchmarks.
inline LayoutDocument random_layout(Rng& rng, std::size_t n_leaves, std::int64_t canvas_w = 360,
                                    std::int64_t canvas_h = 640) {
  static const std::vector<Rgb> colors{{255, 255, 255}, {33, 33, 33},  {33, 150, 243},
                                       {244, 67, 54},   {76, 175, 80}, {255, 193, 7},
                                       {156, 39, 176},  {0, 0, 0}};
  LayoutDocument doc;
  doc.canvas_width = canvas_w;
  doc.canvas_height = canvas_h;
  std::size_t next = 0;
  auto leaf = [&]() {
    Element e;
    e.id = "r" + std::to_string(next++);
    e.kind = kAllKinds[static_cast<std::size_t>(rng.between(0, 7))];  // any non-container kind
    const std::int64_t w = rng.between(0, canvas_w / 2);
    const std::int64_t h = rng.between(0, canvas_h / 3);
    e.bounds = {rng.between(0, canvas_w - w), rng.between(0, canvas_h - h), w, h};
    if (rng.chance(0.8)) e.fill_color = rng.pick(colors);
    if (accepts_text(e.kind) && rng.chance(0.7)) {
      e.text_style = TextStyle{"t", detail::font_families()[rng.between(0, 1)],
                               static_cast<double>(rng.between(10, 24)), rng.pick(colors)};
    }
    return e;
  };
  std::size_t made = 0;
  while (made < n_leaves) {
    if (rng.chance(0.2) && n_leaves - made >= 2) {
      Element group;
      group.id = "r" + std::to_string(next++);
      group.kind = ElementKind::container;
      group.bounds = {0, 0, canvas_w, canvas_h};
      const auto k = static_cast<std::size_t>(rng.between(2, std::min<std::int64_t>(4, n_leaves - made)));
      for (std::size_t i = 0; i < k; ++i) group.children.push_back(leaf());
      made += k;
      doc.elements.push_back(std::move(group));
    } else {
      doc.elements.push_back(leaf());
      ++made;
    }
  }
  return doc;
}

}  // namespace guicomp::synth
