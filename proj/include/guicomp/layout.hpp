#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "guicomp/errors.hpp"

namespace guicomp {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
  friend auto operator<=>(const Rgb&, const Rgb&) = default;
};

inline std::string to_hex(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02X%02X%02X", c.r, c.g, c.b);
  return buf;
}

// Accepts "#RRGGBB" (either case).
inline std::optional<Rgb> parse_hex_color(std::string_view s) {
  if (s.size() != 7 || s[0] != '#') return std::nullopt;
  auto nibble = [](char ch) -> int {
    if (ch >= '0' && ch <= '9') return ch - '0';
    if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
    if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
    return -1;
  };
  std::array<int, 3> v{};
  for (int i = 0; i < 3; ++i) {
    const int hi = nibble(s[1 + 2 * i]);
    const int lo = nibble(s[2 + 2 * i]);
    if (hi < 0 || lo < 0) return std::nullopt;
    v[i] = hi * 16 + lo;
  }
  return Rgb{static_cast<std::uint8_t>(v[0]), static_cast<std::uint8_t>(v[1]),
             static_cast<std::uint8_t>(v[2])};
}

// Axis-aligned rectangle in integer document pixels.
struct Rect {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t w = 0;
  std::int64_t h = 0;

  std::int64_t right() const { return x + w; }
  std::int64_t bottom() const { return y + h; }
  double area() const { return static_cast<double>(w) * static_cast<double>(h); }

  friend bool operator==(const Rect&, const Rect&) = default;
};

enum class ElementKind {
  text,
  edit_text,
  button,
  image_button,
  image,
  icon,
  shape,
  pagination,
  container,
};

inline constexpr std::array<ElementKind, 9> kAllKinds = {
    ElementKind::text,  ElementKind::edit_text, ElementKind::button,
    ElementKind::image_button, ElementKind::image, ElementKind::icon,
    ElementKind::shape, ElementKind::pagination, ElementKind::container};

inline std::string_view to_string(ElementKind k) {
  switch (k) {
    case ElementKind::text: return "text";
    case ElementKind::edit_text: return "edit_text";
    case ElementKind::button: return "button";
    case ElementKind::image_button: return "image_button";
    case ElementKind::image: return "image";
    case ElementKind::icon: return "icon";
    case ElementKind::shape: return "shape";
    case ElementKind::pagination: return "pagination";
    case ElementKind::container: return "container";
  }
  return "container";
}

inline std::optional<ElementKind> kind_from_string(std::string_view s) {
  for (auto k : kAllKinds) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

// Kinds that may carry a TextStyle.
inline bool accepts_text(ElementKind k) {
  return k == ElementKind::text || k == ElementKind::edit_text || k == ElementKind::button ||
         k == ElementKind::pagination;
}

struct TextStyle {
  std::string content;
  std::string font_family;
  double font_size = 14.0;  // points, > 0
  Rgb color;

  friend bool operator==(const TextStyle&, const TextStyle&) = default;
};

struct Element {
  std::string id;
  ElementKind kind = ElementKind::shape;
  Rect bounds;
  std::optional<Rgb> fill_color;
  std::optional<TextStyle> text_style;
  std::vector<Element> children;

  bool is_leaf() const { return children.empty(); }

  friend bool operator==(const Element&, const Element&) = default;
};

struct AppMeta {
  std::string app_id;
  std::string category;
  double rating = 0.0;  // [0, 5]

  friend bool operator==(const AppMeta&, const AppMeta&) = default;
};

struct LayoutDocument {
  std::int64_t canvas_width = 360;
  std::int64_t canvas_height = 640;
  std::vector<Element> elements;
  std::optional<AppMeta> meta;
  // Clamping notices produced while parsing; not part of document identity.
  std::vector<std::string> warnings;

  friend bool operator==(const LayoutDocument& a, const LayoutDocument& b) {
    return a.canvas_width == b.canvas_width && a.canvas_height == b.canvas_height &&
           a.elements == b.elements && a.meta == b.meta;
  }
};

inline constexpr int kLayoutSchemaVersion = 1;

namespace detail {

using nlohmann::json;

inline const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(where + ": missing field '" + key + "'");
  return *it;
}

inline double require_number(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) throw ValidationError(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

inline std::string require_string(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) throw ValidationError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

inline std::int64_t to_pixels(double v) { return static_cast<std::int64_t>(std::floor(v + 0.5)); }

inline Rgb require_color(const json& v, const std::string& where) {
  if (!v.is_string()) throw ValidationError(where + ": color must be a \"#RRGGBB\" string");
  auto c = parse_hex_color(v.get<std::string>());
  if (!c) throw ValidationError(where + ": bad color '" + v.get<std::string>() + "'");
  return *c;
}

// Intersects `r` with the canvas. Returns true when anything changed.
inline bool clamp_to_canvas(Rect& r, std::int64_t cw, std::int64_t ch) {
  const Rect before = r;
  const std::int64_t x0 = std::clamp<std::int64_t>(r.x, 0, cw);
  const std::int64_t y0 = std::clamp<std::int64_t>(r.y, 0, ch);
  const std::int64_t x1 = std::clamp<std::int64_t>(r.x + r.w, x0, cw);
  const std::int64_t y1 = std::clamp<std::int64_t>(r.y + r.h, y0, ch);
  r = Rect{x0, y0, x1 - x0, y1 - y0};
  return !(r == before);
}

struct ParseState {
  std::int64_t cw;
  std::int64_t ch;
  std::unordered_set<std::string> ids;
  std::vector<std::string> warnings;
};

inline Element parse_element(const json& j, ParseState& st) {
  if (!j.is_object()) throw ValidationError("element must be an object");
  Element e;
  e.id = require_string(j, "id", "element");
  const std::string where = "element '" + e.id + "'";
  if (!st.ids.insert(e.id).second) throw ValidationError("duplicate element id '" + e.id + "'");

  const std::string kind = require_string(j, "kind", where);
  auto k = kind_from_string(kind);
  if (!k) throw ValidationError(where + ": unknown kind '" + kind + "'");
  e.kind = *k;

  const json& b = require(j, "bounds", where);
  if (!b.is_object()) throw ValidationError(where + ": bounds must be an object");
  e.bounds = Rect{to_pixels(require_number(b, "x", where)), to_pixels(require_number(b, "y", where)),
                  to_pixels(require_number(b, "w", where)), to_pixels(require_number(b, "h", where))};
  if (e.bounds.w < 0 || e.bounds.h < 0)
    throw ValidationError(where + ": negative width or height");
  if (clamp_to_canvas(e.bounds, st.cw, st.ch)) {
    st.warnings.push_back(where + ": bounds clamped to canvas");
  }

  if (auto it = j.find("fill_color"); it != j.end() && !it->is_null()) {
    e.fill_color = require_color(*it, where);
  }
  if (auto it = j.find("text"); it != j.end() && !it->is_null()) {
    if (!accepts_text(e.kind))
      throw ValidationError(where + ": kind '" + kind + "' cannot carry text");
    if (!it->is_object()) throw ValidationError(where + ": text must be an object");
    TextStyle ts;
    ts.content = require_string(*it, "content", where);
    ts.font_family = require_string(*it, "font_family", where);
    ts.font_size = require_number(*it, "font_size", where);
    if (!(ts.font_size > 0.0)) throw ValidationError(where + ": font_size must be > 0");
    ts.color = require_color(require(*it, "color", where), where);
    e.text_style = std::move(ts);
  }
  if (auto it = j.find("children"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw ValidationError(where + ": children must be an array");
    for (const auto& c : *it) e.children.push_back(parse_element(c, st));
  }
  return e;
}

inline json element_to_json(const Element& e) {
  json j;
  j["id"] = e.id;
  j["kind"] = std::string(to_string(e.kind));
  j["bounds"] = {{"x", e.bounds.x}, {"y", e.bounds.y}, {"w", e.bounds.w}, {"h", e.bounds.h}};
  if (e.fill_color) j["fill_color"] = to_hex(*e.fill_color);
  if (e.text_style) {
    j["text"] = {{"content", e.text_style->content},
                 {"font_family", e.text_style->font_family},
                 {"font_size", e.text_style->font_size},
                 {"color", to_hex(e.text_style->color)}};
  }
  if (!e.children.empty()) {
    json arr = json::array();
    for (const auto& c : e.children) arr.push_back(element_to_json(c));
    j["children"] = std::move(arr);
  }
  return j;
}

}  // namespace detail

// Validates an already-parsed JSON value against layout schema v1.
inline LayoutDocument layout_from_json(const nlohmann::json& j) {
  using detail::require;
  if (!j.is_object()) throw ValidationError("layout must be a JSON object");
  const auto ver = j.find("schema_version");
  if (ver != j.end() &&
      (!ver->is_number_integer() || ver->get<std::int64_t>() != kLayoutSchemaVersion))
    throw ValidationError("unsupported schema_version (expected 1)");

  const auto& canvas = require(j, "canvas", "layout");
  if (!canvas.is_object()) throw ValidationError("canvas must be an object");
  LayoutDocument doc;
  doc.canvas_width = detail::to_pixels(detail::require_number(canvas, "width", "canvas"));
  doc.canvas_height = detail::to_pixels(detail::require_number(canvas, "height", "canvas"));
  if (doc.canvas_width <= 0 || doc.canvas_height <= 0)
    throw ValidationError("canvas width and height must be positive");

  detail::ParseState st{doc.canvas_width, doc.canvas_height, {}, {}};
  const auto& elems = require(j, "elements", "layout");
  if (!elems.is_array()) throw ValidationError("elements must be an array");
  for (const auto& e : elems) doc.elements.push_back(detail::parse_element(e, st));
  if (ver == j.end()) st.warnings.insert(st.warnings.begin(), "schema_version missing; read as 1");

  if (auto it = j.find("meta"); it != j.end() && !it->is_null()) {
    AppMeta m;
    m.app_id = detail::require_string(*it, "app_id", "meta");
    m.category = detail::require_string(*it, "category", "meta");
    m.rating = detail::require_number(*it, "rating", "meta");
    if (m.rating < 0.0 || m.rating > 5.0) throw ValidationError("meta.rating must be in [0,5]");
    doc.meta = std::move(m);
  }
  doc.warnings = std::move(st.warnings);
  return doc;
}

inline LayoutDocument parse_layout(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  return layout_from_json(j);
}

inline nlohmann::json layout_to_json(const LayoutDocument& doc) {
  nlohmann::json j;
  j["schema_version"] = kLayoutSchemaVersion;
  j["canvas"] = {{"width", doc.canvas_width}, {"height", doc.canvas_height}};
  j["elements"] = nlohmann::json::array();
  for (const auto& e : doc.elements) j["elements"].push_back(detail::element_to_json(e));
  if (doc.meta) {
    j["meta"] = {{"app_id", doc.meta->app_id},
                 {"category", doc.meta->category},
                 {"rating", doc.meta->rating}};
  }
  return j;
}

inline std::string serialize_layout(const LayoutDocument& doc) { return layout_to_json(doc).dump(); }

// Childless elements in depth-first document order. The pointers borrow from `doc`.
inline std::vector<const Element*> leaves(const LayoutDocument& doc) {
  std::vector<const Element*> out;
  auto walk = [&out](const auto& self, const Element& e) -> void {
    if (e.children.empty()) {
      out.push_back(&e);
      return;
    }
    for (const auto& c : e.children) self(self, c);
  };
  for (const auto& e : doc.elements) walk(walk, e);
  return out;
}

inline std::size_t element_count(const LayoutDocument& doc) {
  std::size_t n = 0;
  auto walk = [&n](const auto& self, const Element& e) -> void {
    ++n;
    for (const auto& c : e.children) self(self, c);
  };
  for (const auto& e : doc.elements) walk(walk, e);
  return n;
}

namespace detail {

// round(v * num / den) with halves rounded up; den > 0, v and num >= 0.
inline std::int64_t scale_round(std::int64_t v, std::int64_t num, std::int64_t den) {
  return (2 * v * num + den) / (2 * den);
}

inline void scale_element(Element& e, std::int64_t sw, std::int64_t sh, std::int64_t tw,
                          std::int64_t th) {
  Rect& r = e.bounds;
  r = Rect{scale_round(r.x, tw, sw), scale_round(r.y, th, sh), scale_round(r.w, tw, sw),
           scale_round(r.h, th, sh)};
  clamp_to_canvas(r, tw, th);
  for (auto& c : e.children) scale_element(c, sw, sh, tw, th);
}

}  // namespace detail

// Maps a layout onto a canvas of a different size, keeping relative placement.
inline LayoutDocument scale_to_canvas(const LayoutDocument& doc, std::int64_t target_w,
                                      std::int64_t target_h) {
  if (target_w <= 0 || target_h <= 0)
    throw ArgumentError("scale_to_canvas: target size must be positive");
  LayoutDocument out = doc;
  out.warnings.clear();
  for (auto& e : out.elements)
    detail::scale_element(e, doc.canvas_width, doc.canvas_height, target_w, target_h);
  out.canvas_width = target_w;
  out.canvas_height = target_h;
  return out;
}

}  // namespace guicomp
