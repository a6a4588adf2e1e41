#include <gtest/gtest.h>

#include "support.hpp"

using namespace guicomp;
using namespace testing_support;

namespace {

LayoutDocument with_meta(LayoutDocument d, std::string app, std::string category, double rating) {
  d.meta = AppMeta{std::move(app), std::move(category), rating};
  return d;
}

// Ten layout files, three of them in the "game" category, plus two broken ones.
void write_fixture(const TempDir& dir) {
  synth::Rng rng(21);
  for (int i = 0; i < 10; ++i) {
    auto doc = synth::random_layout(rng, 3 + i % 4);
    doc = with_meta(std::move(doc), "app" + std::to_string(i), i < 3 ? "game" : "tools", 1.0 + 0.4 * i);
    write_file(dir / ("screen_" + std::to_string(i) + ".json"), serialize_layout(doc));
  }
  write_file(dir / "broken_a.json", "{\"schema_version\": 1, \"canvas\": ");
  write_file(dir / "broken_b.json", "[1, 2, 3]");
  write_file(dir / "notes.txt", "not a layout");
}

CorpusEntry scored(std::string id, double balance) {
  CorpusEntry e = make_entry(id, doc_of({leaf(id + "_x", ElementKind::button, 10, 10, 50, 20)}));
  e.report.element_balance = balance;
  return e;
}

Corpus trained_corpus(std::size_t n, std::uint64_t seed) {
  auto base = synth::synthesize_corpus(n, seed);
  std::vector<CorpusEntry> entries = base.entries();
  synth::Rng rng(seed);
  for (auto& e : entries) {
    EmbeddingVector v;
    for (auto& x : v.values) x = static_cast<float>(rng.uniform() - 0.5);
    e.embedding = v;
  }
  return Corpus(std::move(entries), EmbeddingMode::trained);
}

}  // namespace

TEST(Ingest, SkipsMalformedFilesWithReasons) {
  TempDir dir("ingest");
  write_fixture(dir);
  const auto r = ingest(dir.path());
  EXPECT_EQ(r.corpus.size(), 10u);
  ASSERT_EQ(r.skipped.size(), 2u);
  EXPECT_EQ(r.skipped[0].file, "broken_a.json");
  EXPECT_EQ(r.skipped[1].file, "broken_b.json");
  EXPECT_FALSE(r.skipped[0].reason.empty());
  ASSERT_NE(r.corpus.find("screen_4"), nullptr);
  EXPECT_EQ(r.corpus.find("screen_4")->meta.category, "tools");
  EXPECT_EQ(r.corpus.embedding_mode(), EmbeddingMode::fallback);
  for (auto m : kAllMetrics) EXPECT_EQ(r.corpus.histogram(m).total(), 10u);
}

TEST(Ingest, RuleSetExcludesCategoriesAndSizes) {
  TempDir dir("rules");
  write_fixture(dir);
  RuleSet rules;
  rules.excluded_categories = {"game"};
  const auto r = ingest(dir.path(), rules);
  EXPECT_EQ(r.corpus.size(), 7u);
  EXPECT_EQ(r.skipped.size(), 5u);
  for (const auto& e : r.corpus.entries()) EXPECT_NE(e.meta.category, "game");

  RuleSet sizes;
  sizes.min_elements = 4;
  sizes.max_elements = 5;
  const auto s = ingest(dir.path(), sizes);
  for (const auto& e : s.corpus.entries()) {
    EXPECT_GE(element_count(e.doc), 4u);
    EXPECT_LE(element_count(e.doc), 5u);
  }
  EXPECT_EQ(s.corpus.size() + s.skipped.size(), 12u);
}

TEST(Ingest, EmptyDirectoryGivesEmptyCorpus) {
  TempDir dir("empty");
  const auto r = ingest(dir.path());
  EXPECT_TRUE(r.corpus.empty());
  EXPECT_FALSE(r.warnings.empty());
  for (auto m : kAllMetrics) EXPECT_EQ(r.corpus.histogram(m).total(), 0u);
  EXPECT_THROW(r.corpus.percentile(Metric::density, 0.5), EmptyCorpusError);
}

TEST(Ingest, MissingDirectoryIsAnIoError) {
  TempDir dir("missing");
  EXPECT_THROW(ingest(dir / "nope"), IoError);
}

TEST(Ingest, ReadsRicoHierarchies) {
  TempDir dir("rico");
  const std::string rico = R"({"activity": {"root": {"class": "android.widget.FrameLayout",
    "bounds": [0, 0, 1440, 2560], "children": [
      {"class": "android.widget.Button", "bounds": [100, 200, 500, 400], "text": "Go"},
      {"class": "android.widget.TextView", "bounds": [100, 600, 900, 700], "text": "Hi"}]}}})";
  write_file(dir / "r1.json", rico);
  const auto r = ingest(dir.path());
  ASSERT_EQ(r.corpus.size(), 1u);
  EXPECT_EQ(leaves(r.corpus.entries()[0].doc).size(), 2u);
}

TEST(Histogram, BinEdges) {
  EXPECT_EQ(Histogram::bin_of(0.0), 0u);
  EXPECT_EQ(Histogram::bin_of(0.049), 0u);
  EXPECT_EQ(Histogram::bin_of(0.05), 1u);
  EXPECT_EQ(Histogram::bin_of(0.95), 19u);
  EXPECT_EQ(Histogram::bin_of(1.0), 19u);
  EXPECT_EQ(Histogram::bin_of(1.7), 19u);
  EXPECT_EQ(Histogram::bin_of(-0.2), 0u);
}

TEST(Percentile, FractionStrictlyBelow) {
  const Corpus c({scored("a", 0.2), scored("b", 0.4), scored("c", 0.6), scored("d", 0.8)}, EmbeddingMode::fallback);
  EXPECT_DOUBLE_EQ(c.percentile(Metric::element_balance, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(c.percentile(Metric::element_balance, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(c.percentile(Metric::element_balance, 0.2), 0.0);
  EXPECT_DOUBLE_EQ(c.percentile(Metric::element_balance, 0.81), 1.0);
  EXPECT_DOUBLE_EQ(percentile(c, Metric::element_balance, 0.6), 0.5);
  EXPECT_EQ(c.histogram(Metric::element_balance).counts[4], 1u);
  EXPECT_EQ(c.histogram(Metric::element_balance).counts[16], 1u);
}

TEST(Percentile, MonotoneInValue) {
  const auto c = synth::synthesize_corpus(60, 4);
  for (auto m : kAllMetrics) {
    double prev = 0.0;
    for (int i = 0; i <= 20; ++i) {
      const double p = c.percentile(m, i / 20.0);
      EXPECT_GE(p, prev);
      EXPECT_LE(p, 1.0);
      prev = p;
    }
  }
}

TEST(CorpusStore, RejectsDuplicateIds) {
  EXPECT_THROW(Corpus({scored("a", 0.1), scored("a", 0.2)}, EmbeddingMode::fallback), ValidationError);
}

TEST(CorpusStore, TrainedModeNeedsEmbeddings) {
  EXPECT_THROW(Corpus({scored("a", 0.1)}, EmbeddingMode::trained), ValidationError);
}

TEST(CorpusStore, EntriesAreOrderedById) {
  const Corpus c({scored("c", 0.1), scored("a", 0.2), scored("b", 0.3)}, EmbeddingMode::fallback);
  EXPECT_EQ(c.entries()[0].id, "a");
  EXPECT_EQ(c.entries()[2].id, "c");
  EXPECT_EQ(c.search_index().size(), 3u);
  EXPECT_EQ(c.search_index().dim(), kRasterSize);
  EXPECT_EQ(c.find("zz"), nullptr);
}

TEST(IndexFile, FallbackRoundTrip) {
  const auto c = synth::synthesize_corpus(40, 2);
  const auto bytes = save_index(c);
  EXPECT_EQ(bytes.substr(0, 4), "GCIX");
  const auto back = load_index(bytes);
  EXPECT_TRUE(back == c);
  EXPECT_EQ(back.embedding_mode(), EmbeddingMode::fallback);
  EXPECT_EQ(save_index(back), bytes);
}

TEST(IndexFile, TrainedRoundTripKeepsEmbeddings) {
  const auto c = trained_corpus(25, 3);
  const auto back = load_index(save_index(c));
  EXPECT_TRUE(back == c);
  EXPECT_EQ(back.embedding_mode(), EmbeddingMode::trained);
  ASSERT_TRUE(back.entries()[7].embedding.has_value());
  EXPECT_EQ(back.entries()[7].embedding->values, c.entries()[7].embedding->values);
  EXPECT_EQ(back.search_index().dim(), kEmbeddingDim);
}

TEST(IndexFile, EmptyCorpusRoundTrip) {
  const Corpus empty;
  const auto back = load_index(save_index(empty));
  EXPECT_TRUE(back.empty());
}

TEST(IndexFile, SavingIsDeterministic) {
  EXPECT_EQ(save_index(synth::synthesize_corpus(20, 8)), save_index(synth::synthesize_corpus(20, 8)));
}

TEST(IndexFile, DetectsDamage) {
  const auto bytes = save_index(synth::synthesize_corpus(10, 5));
  EXPECT_THROW(load_index("GCIY" + bytes.substr(4)), FormatError);
  std::string v9 = bytes;
  v9[4] = 9;
  EXPECT_THROW(load_index(v9), FormatError);
  EXPECT_THROW(load_index(bytes.substr(0, bytes.size() / 2)), CorruptionError);
  EXPECT_THROW(load_index(bytes.substr(0, 6)), CorruptionError);
  std::string flipped = bytes;
  flipped[bytes.size() / 2] ^= 0x20;
  EXPECT_THROW(load_index(flipped), CorruptionError);
  EXPECT_THROW(load_index(""), CorruptionError);
}

TEST(IndexFile, FileHelpers) {
  TempDir dir("files");
  const auto bytes = save_index(synth::synthesize_corpus(5, 1));
  write_file(dir / "c.gcix", bytes);
  EXPECT_EQ(read_file(dir / "c.gcix"), bytes);
  EXPECT_THROW(read_file(dir / "absent.gcix"), IoError);
}

TEST(EmbedCorpus, SwitchesToTrainedMode) {
  auto w = glorot_init<float>(default_encoder_dims(), 6);
  const auto c = synth::synthesize_corpus(6, 6);
  const auto t = embed_corpus(c, w);
  EXPECT_EQ(t.embedding_mode(), EmbeddingMode::trained);
  for (const auto& e : t.entries()) {
    ASSERT_TRUE(e.embedding.has_value());
    const auto single = embed(rasterize(e.doc), w).values;
    for (std::size_t i = 0; i < kEmbeddingDim; ++i)
      EXPECT_NEAR(e.embedding->values[i], single[i], 1e-5 * (1.0 + std::abs(single[i])));
  }
  EXPECT_THROW(embed_corpus(c, glorot_init<float>({12, 6, 3}, 1)), ArgumentError);
}
