#pragma once

// Ingest shim for RICO-style Android view hierarchies
// ({"activity": {"root": node}} or a bare root node, nodes carrying
// "class", "bounds": [left, top, right, bottom], "children", "ancestors").

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "guicomp/errors.hpp"
#include "guicomp/layout.hpp"

namespace guicomp {

namespace detail {

inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

inline std::optional<ElementKind> kind_from_android_class(std::string_view cls) {
  // Order matters: ImageButton must win over Button and ImageView.
  if (ends_with(cls, "EditText")) return ElementKind::edit_text;
  if (ends_with(cls, "ImageButton")) return ElementKind::image_button;
  if (ends_with(cls, "Button")) return ElementKind::button;
  if (ends_with(cls, "ImageView")) return ElementKind::image;
  if (ends_with(cls, "TextView")) return ElementKind::text;
  return std::nullopt;
}

struct RicoState {
  std::int64_t ox = 0;
  std::int64_t oy = 0;
  std::int64_t cw = 0;
  std::int64_t ch = 0;
  std::size_t next_id = 0;
  std::vector<std::string> warnings;
};

inline std::optional<Element> rico_node(const nlohmann::json& n, RicoState& st) {
  if (!n.is_object()) return std::nullopt;
  if (auto v = n.find("visible-to-user"); v != n.end() && v->is_boolean() && !v->get<bool>())
    return std::nullopt;
  auto b = n.find("bounds");
  if (b == n.end() || !b->is_array() || b->size() != 4) return std::nullopt;

  Element e;
  e.id = "n" + std::to_string(st.next_id++);
  const auto l = to_pixels((*b)[0].get<double>()) - st.ox;
  const auto t = to_pixels((*b)[1].get<double>()) - st.oy;
  const auto r = to_pixels((*b)[2].get<double>()) - st.ox;
  const auto btm = to_pixels((*b)[3].get<double>()) - st.oy;
  e.bounds = Rect{l, t, std::max<std::int64_t>(0, r - l), std::max<std::int64_t>(0, btm - t)};
  if (clamp_to_canvas(e.bounds, st.cw, st.ch))
    st.warnings.push_back("node '" + e.id + "': bounds clamped to canvas");

  if (auto c = n.find("children"); c != n.end() && c->is_array()) {
    for (const auto& child : *c) {
      if (auto ce = rico_node(child, st)) e.children.push_back(std::move(*ce));
    }
  }

  std::optional<ElementKind> kind;
  if (auto c = n.find("class"); c != n.end() && c->is_string())
    kind = kind_from_android_class(c->get<std::string>());
  if (!kind) {
    if (auto a = n.find("ancestors"); a != n.end() && a->is_array()) {
      for (const auto& anc : *a) {
        if (anc.is_string() && (kind = kind_from_android_class(anc.get<std::string>()))) break;
      }
    }
  }
  e.kind = kind.value_or(e.children.empty() ? ElementKind::shape : ElementKind::container);
  return e;
}

}  // namespace detail

// Converts a RICO view hierarchy into a layout document. The root node's
// bounds define the canvas. RICO carries no font or color information, so
// text styles and fill colors are left unset.
inline LayoutDocument layout_from_rico(const nlohmann::json& j) {
  const nlohmann::json* root = &j;
  if (auto a = j.find("activity"); a != j.end() && a->is_object()) {
    auto r = a->find("root");
    if (r == a->end()) throw ValidationError("RICO hierarchy: activity has no root");
    root = &*r;
  }
  auto b = root->find("bounds");
  if (b == root->end() || !b->is_array() || b->size() != 4)
    throw ValidationError("RICO hierarchy: root node has no bounds");
  detail::RicoState st;
  st.ox = detail::to_pixels((*b)[0].get<double>());
  st.oy = detail::to_pixels((*b)[1].get<double>());
  st.cw = detail::to_pixels((*b)[2].get<double>()) - st.ox;
  st.ch = detail::to_pixels((*b)[3].get<double>()) - st.oy;
  if (st.cw <= 0 || st.ch <= 0) throw ValidationError("RICO hierarchy: empty root bounds");

  LayoutDocument doc;
  doc.canvas_width = st.cw;
  doc.canvas_height = st.ch;
  if (auto e = detail::rico_node(*root, st)) doc.elements.push_back(std::move(*e));
  doc.warnings = std::move(st.warnings);
  return doc;
}

inline bool looks_like_rico(const nlohmann::json& j) {
  return j.is_object() && !j.contains("schema_version") &&
         (j.contains("activity") || (j.contains("class") && j.contains("bounds")));
}

// Parses either a schema-v1 layout or a RICO hierarchy.
inline LayoutDocument parse_any_layout(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  if (looks_like_rico(j)) return layout_from_rico(j);
  return layout_from_json(j);
}

}  // namespace guicomp
