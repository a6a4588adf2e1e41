#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "guicomp/autoencoder.hpp"
#include "guicomp/binio.hpp"
#include "guicomp/errors.hpp"
#include "guicomp/knn.hpp"
#include "guicomp/layout.hpp"
#include "guicomp/metrics.hpp"
#include "guicomp/raster.hpp"
#include "guicomp/rico.hpp"

namespace guicomp {

enum class EmbeddingMode : std::uint8_t { fallback = 0, trained = 1 };

inline std::string_view to_string(EmbeddingMode m) {
  return m == EmbeddingMode::trained ? "trained" : "fallback";
}

// 20 equal bins over [0,1]; bins are half-open except the last, which is closed.
struct Histogram {
  static constexpr std::size_t kBins = 20;
  std::array<std::uint64_t, kBins> counts{};

  static std::size_t bin_of(double v) {
    const double scaled = std::floor(std::clamp(v, 0.0, 1.0) * static_cast<double>(kBins));
    return std::min(kBins - 1, static_cast<std::size_t>(scaled));
  }
  void add(double v) { ++counts[bin_of(v)]; }
  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }

  friend bool operator==(const Histogram&, const Histogram&) = default;
};

inline nlohmann::json to_json(const Histogram& h) {
  return {{"bin_count", Histogram::kBins}, {"range", {0.0, 1.0}}, {"counts", h.counts}};
}

struct CorpusEntry {
  std::string id;
  LayoutDocument doc;
  AppMeta meta;
  std::optional<EmbeddingVector> embedding;
  MetricReport report;

  friend bool operator==(const CorpusEntry&, const CorpusEntry&) = default;
};

inline CorpusEntry make_entry(std::string id, LayoutDocument doc) {
  CorpusEntry e;
  e.meta = doc.meta.value_or(AppMeta{id, "", 0.0});
  e.id = std::move(id);
  e.report = evaluate(doc);
  e.doc = std::move(doc);
  return e;
}

// Immutable template store: entries ordered by id, per-metric score
// distributions, and the vectors searched by the recommender (trained
// embeddings, or flattened rasters in fallback mode).
class Corpus {
 public:
  Corpus() : Corpus(std::vector<CorpusEntry>{}, EmbeddingMode::fallback) {}

  Corpus(std::vector<CorpusEntry> entries, EmbeddingMode mode) : entries_(std::move(entries)), mode_(mode) {
    std::sort(entries_.begin(), entries_.end(),
              [](const CorpusEntry& a, const CorpusEntry& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (i > 0 && entries_[i].id == entries_[i - 1].id)
        throw ValidationError("duplicate corpus id '" + entries_[i].id + "'");
      by_id_[entries_[i].id] = i;
    }
    for (auto m : kAllMetrics) {
      auto& sorted = sorted_scores_[static_cast<std::size_t>(m)];
      auto& hist = histograms_[static_cast<std::size_t>(m)];
      for (const auto& e : entries_) {
        sorted.push_back(e.report.get(m));
        hist.add(e.report.get(m));
      }
      std::sort(sorted.begin(), sorted.end());
    }
    if (mode_ == EmbeddingMode::trained) {
      search_ = CosineIndex(kEmbeddingDim);
      for (const auto& e : entries_) {
        if (!e.embedding || e.embedding->values.size() != kEmbeddingDim)
          throw ValidationError("corpus entry '" + e.id + "' lacks a 64-d embedding");
        search_.add(e.id, e.embedding->values);
      }
    } else {
      search_ = CosineIndex(kRasterSize);
      for (const auto& e : entries_) search_.add(e.id, rasterize(e.doc).values);
    }
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<CorpusEntry>& entries() const { return entries_; }
  EmbeddingMode embedding_mode() const { return mode_; }
  const Histogram& histogram(Metric m) const { return histograms_[static_cast<std::size_t>(m)]; }
  const CosineIndex& search_index() const { return search_; }

  const CorpusEntry* find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    return it == by_id_.end() ? nullptr : &entries_[it->second];
  }

  // Fraction of entries whose score is strictly below `value`.
  double percentile(Metric m, double value) const {
    if (entries_.empty()) throw EmptyCorpusError("percentile is undefined for an empty corpus");
    const auto& s = sorted_scores_[static_cast<std::size_t>(m)];
    const auto below = std::lower_bound(s.begin(), s.end(), value) - s.begin();
    return static_cast<double>(below) / static_cast<double>(s.size());
  }

  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.mode_ == b.mode_ && a.entries_ == b.entries_ && a.histograms_ == b.histograms_;
  }

 private:
  std::vector<CorpusEntry> entries_;
  EmbeddingMode mode_ = EmbeddingMode::fallback;
  std::map<std::string, std::size_t, std::less<>> by_id_;
  std::array<Histogram, 6> histograms_{};
  std::array<std::vector<double>, 6> sorted_scores_{};
  CosineIndex search_;
};

inline double percentile(const Corpus& c, Metric m, double value) { return c.percentile(m, value); }

// Computes trained embeddings for every entry and switches the mode.
inline Corpus embed_corpus(const Corpus& corpus, const AutoencoderWeights<float>& w,
                           std::size_t chunk = 256) {
  if (w.input_dim() != kRasterSize || w.embedding_dim() != kEmbeddingDim)
    throw ArgumentError("embed_corpus: weights must map 13500 inputs to 64-d codes");
  std::vector<CorpusEntry> entries = corpus.entries();
  for (std::size_t start = 0; start < entries.size(); start += chunk) {
    const std::size_t count = std::min(chunk, entries.size() - start);
    RowMatrix<float> batch(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(kRasterSize));
    for (std::size_t r = 0; r < count; ++r) {
      const auto raster = rasterize(entries[start + r].doc);
      for (std::size_t c = 0; c < kRasterSize; ++c) batch(r, c) = raster.values[c];
    }
    const auto codes = encode_batch<float>(batch, w);
    for (std::size_t r = 0; r < count; ++r) {
      EmbeddingVector e;
      for (std::size_t c = 0; c < kEmbeddingDim; ++c) e.values[c] = codes(r, c);
      entries[start + r].embedding = std::move(e);
    }
  }
  return Corpus(std::move(entries), EmbeddingMode::trained);
}

// ---- ingest

// Declarative stand-in for manual screening of corpus screens.
struct RuleSet {
  std::set<std::string> excluded_categories;
  std::size_t min_elements = 1;
  std::optional<std::size_t> max_elements;
};

struct SkipRecord {
  std::string file;
  std::string reason;
};

struct IngestResult {
  Corpus corpus;
  std::vector<SkipRecord> skipped;
  std::vector<std::string> warnings;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, std::string_view bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to '" + p.string() + "'");
}

// Loads every *.json layout (schema v1 or RICO hierarchy) in `directory`.
// Files that fail to parse or violate a rule are skipped with a reason.
// The entry id is the file stem.
inline IngestResult ingest(const std::filesystem::path& directory, const RuleSet& rules = {}) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(directory, ec))
    throw IoError("cannot read corpus directory '" + directory.string() + "'");
  std::vector<fs::path> files;
  for (fs::directory_iterator it(directory, ec), end; !ec && it != end; it.increment(ec)) {
    if (it->is_regular_file() && it->path().extension() == ".json") files.push_back(it->path());
  }
  if (ec) throw IoError("cannot list '" + directory.string() + "': " + ec.message());
  std::sort(files.begin(), files.end());

  IngestResult result;
  std::vector<CorpusEntry> entries;
  for (const auto& f : files) {
    const std::string name = f.filename().string();
    LayoutDocument doc;
    try {
      doc = parse_any_layout(read_file(f));
    } catch (const Error& e) {
      result.skipped.push_back({name, e.what()});
      continue;
    }
    const std::string category = doc.meta ? doc.meta->category : "";
    if (rules.excluded_categories.count(category)) {
      result.skipped.push_back({name, "excluded category '" + category + "'"});
      continue;
    }
    const std::size_t n = element_count(doc);
    if (n < rules.min_elements) {
      result.skipped.push_back({name, "too few elements (" + std::to_string(n) + ")"});
      continue;
    }
    if (rules.max_elements && n > *rules.max_elements) {
      result.skipped.push_back({name, "too many elements (" + std::to_string(n) + ")"});
      continue;
    }
    for (const auto& w : doc.warnings) result.warnings.push_back(name + ": " + w);
    entries.push_back(make_entry(f.stem().string(), std::move(doc)));
  }
  if (entries.empty()) result.warnings.push_back("corpus is empty: no admissible entries");
  result.corpus = Corpus(std::move(entries), EmbeddingMode::fallback);
  return result;
}

// ---- index container: "GCIX" | version | mode | entries | histograms | CRC32

inline constexpr char kIndexMagic[4] = {'G', 'C', 'I', 'X'};
inline constexpr std::uint32_t kIndexVersion = 1;

inline std::string save_index(const Corpus& corpus) {
  binio::Writer out;
  out.bytes(std::string_view(kIndexMagic, 4));
  out.u32(kIndexVersion);
  out.u8(static_cast<std::uint8_t>(corpus.embedding_mode()));
  out.u32(static_cast<std::uint32_t>(corpus.size()));
  for (const auto& e : corpus.entries()) {
    out.str(e.id);
    out.str(serialize_layout(e.doc));
    out.str(e.meta.app_id);
    out.str(e.meta.category);
    out.f64(e.meta.rating);
    if (e.embedding) {
      out.u32(static_cast<std::uint32_t>(e.embedding->values.size()));
      for (float v : e.embedding->values) out.f32(v);
    } else {
      out.u32(0);
    }
    for (auto m : kAllMetrics) out.f64(e.report.get(m));
    out.f64(e.report.overall);
  }
  for (auto m : kAllMetrics) {
    for (auto c : corpus.histogram(m).counts) out.u64(c);
  }
  const std::uint32_t crc = binio::crc32_of(out.data());
  out.u32(crc);
  return out.take();
}

inline Corpus load_index(std::string_view bytes) {
  if (bytes.size() < 8) throw CorruptionError("index truncated");
  if (bytes.substr(0, 4) != std::string_view(kIndexMagic, 4))
    throw FormatError("not a corpus index (bad magic)");
  binio::Reader head(bytes.substr(4, 4));
  const auto version = head.u32();
  if (version != kIndexVersion)
    throw FormatError("unsupported index version " + std::to_string(version));
  if (bytes.size() < 13) throw CorruptionError("index truncated");
  const auto body = bytes.substr(0, bytes.size() - 4);
  binio::Reader trailer(bytes.substr(bytes.size() - 4));
  if (trailer.u32() != binio::crc32_of(body)) throw CorruptionError("index checksum mismatch");

  binio::Reader in(body.substr(8));
  const auto mode_byte = in.u8();
  if (mode_byte > 1) throw CorruptionError("index: unknown embedding mode");
  const auto mode = static_cast<EmbeddingMode>(mode_byte);
  const auto count = in.u32();
  std::vector<CorpusEntry> entries;
  entries.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    CorpusEntry e;
    e.id = in.str();
    try {
      e.doc = parse_layout(in.str());
    } catch (const Error& err) {
      throw CorruptionError("index: entry '" + e.id + "' has an invalid layout: " + err.what());
    }
    e.meta.app_id = in.str();
    e.meta.category = in.str();
    e.meta.rating = in.f64();
    const auto dim = in.u32();
    if (dim != 0) {
      if (dim != kEmbeddingDim) throw CorruptionError("index: embedding of wrong length");
      EmbeddingVector v;
      for (auto& x : v.values) x = in.f32();
      e.embedding = std::move(v);
    }
    e.report.element_balance = in.f64();
    e.report.alignment = in.f64();
    e.report.color_unity = in.f64();
    e.report.font_unity = in.f64();
    e.report.element_size = in.f64();
    e.report.density = in.f64();
    e.report.overall = in.f64();
    entries.push_back(std::move(e));
  }
  std::array<Histogram, 6> stored{};
  for (auto& h : stored)
    for (auto& c : h.counts) c = in.u64();
  if (in.remaining() != 0) throw CorruptionError("index: trailing bytes");

  Corpus corpus(std::move(entries), mode);
  for (auto m : kAllMetrics) {
    if (!(corpus.histogram(m) == stored[static_cast<std::size_t>(m)]))
      throw CorruptionError("index: stored histogram disagrees with entries");
  }
  return corpus;
}

}  // namespace guicomp
