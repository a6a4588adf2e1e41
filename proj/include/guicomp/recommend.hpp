#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "guicomp/autoencoder.hpp"
#include "guicomp/corpus.hpp"
#include "guicomp/errors.hpp"
#include "guicomp/knn.hpp"
#include "guicomp/palette.hpp"
#include "guicomp/raster.hpp"

namespace guicomp {

inline constexpr std::size_t kDefaultSimilar = 8;
inline constexpr std::size_t kDefaultRandom = 4;
inline constexpr std::size_t kPaletteSize = 5;

struct Recommendation {
  std::string entry_id;
  double distance = 1.0;  // cosine distance to the query, [0,2]
  bool is_random = false;
  std::vector<ColorSwatch> palette;
  MetricReport report;
};

struct RecommendOptions {
  std::size_t k_similar = kDefaultSimilar;
  std::size_t n_random = kDefaultRandom;
  std::uint64_t seed = 0;
  std::optional<double> min_rating;
  std::optional<std::string> category;
};

// Vector compared against the corpus search index: the trained 64-d code,
// or the flattened raster when the corpus runs in fallback mode.
inline std::vector<float> query_vector(const LayoutDocument& doc, const Corpus& corpus,
                                       const AutoencoderWeights<float>* weights) {
  const RasterTensor raster = rasterize(doc);
  if (corpus.embedding_mode() == EmbeddingMode::fallback) return raster.values;
  if (!weights) throw ArgumentError("corpus uses trained embeddings but no weights are loaded");
  return embed(raster, *weights).values;
}

// Top `k_similar` neighbours from the filtered pool plus `n_random` seeded
// draws from the rest of it. An empty layout gets only random entries.
inline std::vector<Recommendation> recommend(const LayoutDocument& doc, const Corpus& corpus,
                                             const RecommendOptions& opt,
                                             const AutoencoderWeights<float>* weights = nullptr) {
  if (opt.k_similar + opt.n_random < 1)
    throw ArgumentError("recommend: k_similar + n_random must be >= 1");
  const auto& entries = corpus.entries();
  std::vector<char> admitted(entries.size(), 0);
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& m = entries[i].meta;
    if (opt.min_rating && m.rating < *opt.min_rating) continue;
    if (opt.category && m.category != *opt.category) continue;
    admitted[i] = 1;
    pool.push_back(i);
  }
  if (pool.empty()) return {};

  const auto q = query_vector(doc, corpus, weights);
  const auto& index = corpus.search_index();
  const bool empty_canvas = leaves(doc).empty();
  const std::size_t n_similar = empty_canvas ? 0 : opt.k_similar;
  const std::size_t n_random = empty_canvas ? opt.k_similar + opt.n_random : opt.n_random;

  std::vector<Recommendation> out;
  std::set<std::string> taken;
  for (const auto& nb : index.query(q, n_similar, [&](std::size_t i) { return admitted[i] != 0; })) {
    Recommendation r;
    r.entry_id = nb.id;
    r.distance = nb.distance;
    taken.insert(nb.id);
    out.push_back(std::move(r));
  }

  std::vector<std::size_t> rest;
  for (std::size_t i : pool)
    if (!taken.count(entries[i].id)) rest.push_back(i);
  std::mt19937_64 rng(opt.seed);
  const std::size_t draws = std::min(n_random, rest.size());
  for (std::size_t d = 0; d < draws; ++d) {
    const std::size_t j = d + static_cast<std::size_t>(rng() % (rest.size() - d));
    std::swap(rest[d], rest[j]);
    Recommendation r;
    r.entry_id = entries[rest[d]].id;
    r.distance = index.distance(q, rest[d]);
    r.is_random = true;
    out.push_back(std::move(r));
  }

  for (auto& r : out) {
    const CorpusEntry* e = corpus.find(r.entry_id);
    r.report = e->report;
    r.palette = dominant_palette(e->doc, kPaletteSize);
  }
  return out;
}

inline nlohmann::json to_json(const Recommendation& r) {
  return {{"entry_id", r.entry_id}, {"distance", r.distance}, {"is_random", r.is_random},
          {"palette", to_json(r.palette)}, {"report", to_json(r.report)}};
}

inline nlohmann::json to_json(const std::vector<Recommendation>& rs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rs) arr.push_back(to_json(r));
  return arr;
}

}  // namespace guicomp
