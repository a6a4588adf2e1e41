#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <sstream>

#include "support.hpp"

using namespace guicomp;
using namespace testing_support;
using nlohmann::json;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(GUICOMP_CLI) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir("cli");
    const auto layouts = *dir_ / "layouts";
    std::filesystem::create_directories(layouts);
    run("synth " + q(layouts) + " --count 14 --seed 4");
    ingest_ = run("ingest " + q(layouts) + " --out " + q(*dir_ / "c.gcix"));
    write_file(*dir_ / "empty.json", R"({"schema_version": 1, "canvas": {"width": 360, "height": 640}, "elements": []})");
    write_file(*dir_ / "one.json", serialize_layout(doc_of({leaf("b", ElementKind::button, 0, 0, 180, 640)})));
    write_file(*dir_ / "bad.json", "{\"schema_version\": 1,");
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }

  static TempDir* dir_;
  static RunResult ingest_;
};

TempDir* CliTest::dir_ = nullptr;
RunResult CliTest::ingest_;

}  // namespace

TEST_F(CliTest, IngestWritesAnIndex) {
  ASSERT_EQ(ingest_.code, 0);
  const auto j = json::parse(ingest_.out);
  EXPECT_EQ(j.at("corpus_size"), 14);
  EXPECT_EQ(j.at("skipped"), 0);
  EXPECT_EQ(load_index(read_file(*dir_ / "c.gcix")).size(), 14u);
}

TEST_F(CliTest, ScoreEmptyLayout) {
  const auto r = run("score " + q(*dir_ / "empty.json"));
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("report").at("density"), 0.0);
  EXPECT_EQ(j.at("report").at("element_balance"), 1.0);
  EXPECT_FALSE(j.contains("percentiles"));
}

TEST_F(CliTest, ScoreWithPercentiles) {
  const auto r = run("score " + q(*dir_ / "one.json") + " --index " + q(*dir_ / "c.gcix"));
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_DOUBLE_EQ(j.at("report").at("density").get<double>(), 0.5);
  EXPECT_EQ(j.at("percentiles").size(), 6u);
}

TEST_F(CliTest, RecommendCounts) {
  const auto r = run("recommend " + q(*dir_ / "one.json") + " --index " + q(*dir_ / "c.gcix") + " -k 0 -r 4 --seed 2");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  ASSERT_EQ(j.at("recommendations").size(), 4u);
  for (const auto& rec : j.at("recommendations")) EXPECT_TRUE(rec.at("is_random").get<bool>());
  EXPECT_EQ(j.at("seed"), 2);

  const auto d = run("recommend " + q(*dir_ / "one.json") + " --index " + q(*dir_ / "c.gcix"));
  ASSERT_EQ(d.code, 0);
  EXPECT_EQ(json::parse(d.out).at("recommendations").size(), 12u);
}

TEST_F(CliTest, AttentionJsonAndPng) {
  const auto r = run("attention " + q(*dir_ / "one.json"));
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("width"), 50);
  EXPECT_EQ(j.at("height"), 90);
  const auto p = run("attention " + q(*dir_ / "one.json") + " --png " + q(*dir_ / "a.png"));
  ASSERT_EQ(p.code, 0);
  EXPECT_NO_THROW(decode_png(read_file(*dir_ / "a.png")));
}

TEST_F(CliTest, TrainPrintsEpochLinesAndEmbedSwitchesMode) {
  const auto r = run("train --index " + q(*dir_ / "c.gcix") + " --out " + q(*dir_ / "w.gcae") +
                     " --epochs 2 --batch 8 --seed 3");
  ASSERT_EQ(r.code, 0);
  std::istringstream lines(r.out);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    const auto j = json::parse(line);
    EXPECT_EQ(j.at("epoch"), ++n);
    EXPECT_TRUE(j.contains("train_mse"));
    EXPECT_TRUE(j.contains("val_mse"));
  }
  EXPECT_EQ(n, 2);
  const auto w = load_weights(read_file(*dir_ / "w.gcae"));
  EXPECT_EQ(w.epochs_trained, 2u);

  const auto e = run("embed --index " + q(*dir_ / "c.gcix") + " --weights " + q(*dir_ / "w.gcae") + " --out " +
                     q(*dir_ / "t.gcix"));
  ASSERT_EQ(e.code, 0);
  EXPECT_EQ(json::parse(e.out).at("embedding_mode"), "trained");
  const auto rec = run("recommend " + q(*dir_ / "one.json") + " --index " + q(*dir_ / "t.gcix") + " --weights " +
                       q(*dir_ / "w.gcae"));
  ASSERT_EQ(rec.code, 0);
  EXPECT_EQ(json::parse(rec.out).at("embedding_mode"), "trained");
  EXPECT_EQ(run("recommend " + q(*dir_ / "one.json") + " --index " + q(*dir_ / "t.gcix")).code, 1);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run("score " + q(*dir_ / "missing.json")).code, 2);
  EXPECT_EQ(run("score " + q(*dir_ / "bad.json")).code, 1);
  write_file(*dir_ / "junk.gcix", "definitely not an index");
  EXPECT_EQ(run("score " + q(*dir_ / "one.json") + " --index " + q(*dir_ / "junk.gcix")).code, 2);
  EXPECT_EQ(run("recommend " + q(*dir_ / "one.json")).code, 1);
  EXPECT_EQ(run("no-such-command").code, 1);
  EXPECT_EQ(run("--help").code, 0);
}
