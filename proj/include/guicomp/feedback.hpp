#pragma once

#include <array>
#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "guicomp/attention.hpp"
#include "guicomp/autoencoder.hpp"
#include "guicomp/corpus.hpp"
#include "guicomp/metrics.hpp"
#include "guicomp/palette.hpp"
#include "guicomp/recommend.hpp"

namespace guicomp {

struct PanelError {
  std::string code;
  std::string message;
};

struct StageTiming {
  double evaluate_ms = 0.0;
  double recommend_ms = 0.0;
  double attention_ms = 0.0;
  double palette_ms = 0.0;
  double total_ms = 0.0;
};

// Everything the studio needs after one edit. Panels other than the report
// may be absent; the matching entry in `errors` says why.
struct FeedbackBundle {
  MetricReport report;
  std::optional<std::array<double, 6>> percentiles;  // aligned with kAllMetrics
  std::array<Histogram, 6> histograms{};
  std::vector<Recommendation> recommendations;
  std::vector<ColorSwatch> palette;
  std::optional<AttentionMap> attention;
  std::map<std::string, PanelError> errors;  // keyed by panel name
  EmbeddingMode embedding_mode = EmbeddingMode::fallback;
  std::uint64_t seed = 0;
  StageTiming timing;
};

namespace detail {

template <typename F>
double timed_ms(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

inline PanelError panel_error(const std::exception& e) {
  if (const auto* ge = dynamic_cast<const Error*>(&e)) return {ge->code(), ge->what()};
  return {"internal_error", e.what()};
}

}  // namespace detail

inline FeedbackBundle assemble_feedback(const LayoutDocument& doc, const Corpus& corpus,
                                        const RecommendOptions& options,
                                        const AttentionModel& model,
                                        const AutoencoderWeights<float>* weights = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  FeedbackBundle b;
  b.embedding_mode = corpus.embedding_mode();
  b.seed = options.seed;

  b.timing.evaluate_ms = detail::timed_ms([&] {
    b.report = evaluate(doc);
    for (auto m : kAllMetrics) b.histograms[static_cast<std::size_t>(m)] = corpus.histogram(m);
    if (corpus.empty()) {
      b.errors["percentiles"] = {"empty_corpus", "percentiles are undefined for an empty corpus"};
    } else {
      std::array<double, 6> p{};
      for (auto m : kAllMetrics)
        p[static_cast<std::size_t>(m)] = corpus.percentile(m, b.report.get(m));
      b.percentiles = p;
    }
  });

  b.timing.recommend_ms = detail::timed_ms([&] {
    try {
      b.recommendations = recommend(doc, corpus, options, weights);
    } catch (const std::exception& e) {
      b.errors["recommendations"] = detail::panel_error(e);
    }
  });

  b.timing.palette_ms = detail::timed_ms([&] {
    try {
      b.palette = dominant_palette(doc, kPaletteSize);
    } catch (const std::exception& e) {
      b.errors["palette"] = detail::panel_error(e);
    }
  });

  b.timing.attention_ms = detail::timed_ms([&] {
    try {
      b.attention = attention_map(doc, model);
    } catch (const std::exception& e) {
      b.errors["attention"] = detail::panel_error(e);
    }
  });

  b.timing.total_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return b;
}

inline nlohmann::json to_json(const FeedbackBundle& b) {
  using nlohmann::json;
  json j;
  j["report"] = to_json(b.report);
  json metrics = json::array();
  for (auto m : kAllMetrics) metrics.push_back(std::string(to_string(m)));
  j["metrics"] = metrics;
  j["percentiles"] = b.percentiles ? json(*b.percentiles) : json(nullptr);
  json hists = json::array();
  for (auto m : kAllMetrics) {
    json h = to_json(b.histograms[static_cast<std::size_t>(m)]);
    h["metric"] = std::string(to_string(m));
    hists.push_back(std::move(h));
  }
  j["histograms"] = std::move(hists);
  j["recommendations"] = to_json(b.recommendations);
  j["palette"] = to_json(b.palette);
  j["attention"] = b.attention ? to_json(*b.attention) : json(nullptr);
  json errors = json::object();
  for (const auto& [panel, e] : b.errors) errors[panel] = {{"code", e.code}, {"message", e.message}};
  j["errors"] = std::move(errors);
  j["embedding_mode"] = std::string(to_string(b.embedding_mode));
  j["seed"] = b.seed;
  j["timing_ms"] = {{"evaluate", b.timing.evaluate_ms},
                    {"recommend", b.timing.recommend_ms},
                    {"palette", b.timing.palette_ms},
                    {"attention", b.timing.attention_ms},
                    {"total", b.timing.total_ms}};
  return j;
}

}  // namespace guicomp
