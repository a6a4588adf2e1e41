// guicomp: command-line front end for the GUI design feedback engine.
//
// Exit codes: 0 success, 1 validation/usage error, 2 I/O error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "guicomp/guicomp.hpp"
#include "guicomp/server.hpp"

namespace fs = std::filesystem;
using namespace guicomp;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

LayoutDocument read_layout(const std::string& path) {
  LayoutDocument doc = parse_any_layout(read_file(path));
  for (const auto& w : doc.warnings) std::cerr << "warning: " << w << "\n";
  return doc;
}

Corpus read_index(const std::string& path) { return load_index(read_file(path)); }

std::optional<AutoencoderWeights<float>> read_weights(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return load_weights(read_file(path));
}

int run_synth(const std::string& dir, std::size_t count, std::uint64_t seed) {
  synth::write_synthetic_corpus(dir, count, seed);
  std::cerr << "wrote " << count << " layouts to " << dir << "\n";
  return 0;
}

int run_ingest(const std::string& dir, const std::string& out, const RuleSet& rules) {
  auto result = ingest(dir, rules);
  for (const auto& s : result.skipped) std::cerr << "skipped " << s.file << ": " << s.reason << "\n";
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  write_file(out, save_index(result.corpus));
  nlohmann::json summary = {{"corpus_size", result.corpus.size()},
                            {"skipped", result.skipped.size()},
                            {"index", out}};
  std::cout << summary.dump() << "\n";
  return 0;
}

int run_train(const std::string& index, const std::string& out, TrainConfig cfg,
              const std::string& report_path) {
  const Corpus corpus = read_index(index);
  std::vector<RasterTensor> rasters;
  rasters.reserve(corpus.size());
  for (const auto& e : corpus.entries()) rasters.push_back(rasterize(e.doc));
  std::optional<std::ofstream> report;
  if (!report_path.empty()) {
    report.emplace(report_path);
    if (!*report) throw IoError("cannot write '" + report_path + "'");
  }
  auto result = train_autoencoder(rasters, cfg, [&](const EpochRecord& r) {
    const std::string line = to_json(r).dump();
    std::cout << line << std::endl;
    if (report) *report << line << "\n";
  });
  write_file(out, save_weights(result.weights));
  std::cerr << "trained on " << result.report.train_count << " rasters, validated on "
            << result.report.validation_count << "; weights written to " << out << "\n";
  return 0;
}

int run_embed(const std::string& index, const std::string& weights_path, const std::string& out) {
  const Corpus corpus = read_index(index);
  const auto weights = load_weights(read_file(weights_path));
  const Corpus embedded = embed_corpus(corpus, weights);
  write_file(out.empty() ? index : out, save_index(embedded));
  nlohmann::json summary = {{"corpus_size", embedded.size()},
                            {"embedding_mode", std::string(to_string(embedded.embedding_mode()))}};
  std::cout << summary.dump() << "\n";
  return 0;
}

int run_score(const std::string& layout, const std::string& index) {
  const LayoutDocument doc = read_layout(layout);
  const MetricReport report = evaluate(doc);
  nlohmann::json j = {{"report", to_json(report)}};
  if (!index.empty()) {
    const Corpus corpus = read_index(index);
    if (!corpus.empty()) {
      nlohmann::json p;
      for (auto m : kAllMetrics) p[std::string(to_string(m))] = corpus.percentile(m, report.get(m));
      j["percentiles"] = p;
    }
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_recommend(const std::string& layout, const std::string& index,
                  const std::string& weights_path, const RecommendOptions& opt) {
  const LayoutDocument doc = read_layout(layout);
  const Corpus corpus = read_index(index);
  const auto weights = read_weights(weights_path);
  const auto recs = recommend(doc, corpus, opt, weights ? &*weights : nullptr);
  nlohmann::json j = {{"seed", opt.seed},
                      {"embedding_mode", std::string(to_string(corpus.embedding_mode()))},
                      {"recommendations", to_json(recs)}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_attention(const std::string& layout, const std::string& png) {
  const LayoutDocument doc = read_layout(layout);
  const AttentionMap map = attention_map(doc, BaselineSaliencyModel{});
  if (png.empty()) {
    std::cout << to_json(map).dump() << "\n";
  } else {
    write_file(png, render_heatmap_png(map));
  }
  return 0;
}

int run_serve(const std::string& index, const std::string& weights_path, const std::string& host,
              int port) {
  auto state = make_service_state(read_index(index), read_weights(weights_path));
  std::cerr << "serving " << state->corpus.size() << " templates ("
            << to_string(state->corpus.embedding_mode()) << " embeddings) on " << host << ":"
            << port << "\n";
  auto service = std::make_shared<FeedbackService>(std::move(state));
  HttpServer server(service);
  server.run(host, port);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GUI design feedback engine: scoring, template recommendation, attention maps"};
  app.require_subcommand(1);

  std::string dir, out, index, weights, layout, png, report_path, host = "127.0.0.1";
  std::size_t count = 1000;
  std::uint64_t seed = 0;
  int port = 8080;

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic template corpus");
  synth_cmd->add_option("dir", dir, "Output directory")->required();
  synth_cmd->add_option("--count", count, "Number of layouts");
  synth_cmd->add_option("--seed", seed, "Generator seed");

  RuleSet rules;
  std::vector<std::string> excluded;
  auto* ingest_cmd = app.add_subcommand("ingest", "Build a corpus index from a layout directory");
  ingest_cmd->add_option("dir", dir, "Directory of layout JSON files")->required();
  ingest_cmd->add_option("--out", out, "Index file to write")->required();
  ingest_cmd->add_option("--exclude-category", excluded, "Skip entries in this category");
  ingest_cmd->add_option("--min-elements", rules.min_elements, "Skip layouts with fewer elements");
  std::size_t max_elements = 0;
  ingest_cmd->add_option("--max-elements", max_elements, "Skip layouts with more elements");

  TrainConfig cfg;
  double split = 0.9;
  auto* train_cmd = app.add_subcommand("train", "Train the layout autoencoder");
  train_cmd->add_option("--index", index, "Corpus index")->required();
  train_cmd->add_option("--out", out, "Weights file to write")->required();
  train_cmd->add_option("--epochs", cfg.max_epochs, "Training epochs")->required();
  train_cmd->add_option("--batch", cfg.batch_size, "Minibatch size");
  train_cmd->add_option("--split", split, "Training fraction (rest is validation)");
  train_cmd->add_option("--seed", seed, "Initialization and shuffling seed");
  train_cmd->add_option("--report", report_path, "Also write epoch records to this JSONL file");

  auto* embed_cmd = app.add_subcommand("embed", "Recompute corpus embeddings with trained weights");
  embed_cmd->add_option("--index", index, "Corpus index")->required();
  embed_cmd->add_option("--weights", weights, "Weights file")->required();
  embed_cmd->add_option("--out", out, "Write to this index instead of updating in place");

  auto* score_cmd = app.add_subcommand("score", "Print the visual complexity report of a layout");
  score_cmd->add_option("layout", layout, "Layout JSON")->required();
  score_cmd->add_option("--index", index, "Corpus index for percentiles");

  RecommendOptions ropt;
  std::optional<double> min_rating;
  std::optional<std::string> category;
  auto* rec_cmd = app.add_subcommand("recommend", "Recommend similar and random templates");
  rec_cmd->add_option("layout", layout, "Layout JSON")->required();
  rec_cmd->add_option("--index", index, "Corpus index")->required();
  rec_cmd->add_option("--weights", weights, "Weights file (needed for trained indexes)");
  rec_cmd->add_option("-k,--similar", ropt.k_similar, "Similar templates");
  rec_cmd->add_option("-r,--random", ropt.n_random, "Random templates");
  rec_cmd->add_option("--seed", ropt.seed, "Seed for random draws");
  rec_cmd->add_option("--min-rating", min_rating, "Minimum app rating");
  rec_cmd->add_option("--category", category, "Restrict to one app category");

  auto* att_cmd = app.add_subcommand("attention", "Predict an attention heatmap");
  att_cmd->add_option("layout", layout, "Layout JSON")->required();
  att_cmd->add_option("--png", png, "Write a colormapped PNG instead of JSON");

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--index", index, "Corpus index")->required();
  serve_cmd->add_option("--weights", weights, "Weights file");
  serve_cmd->add_option("--port", port, "Port");
  serve_cmd->add_option("--host", host, "Bind address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    if (*synth_cmd) return run_synth(dir, count, seed);
    if (*ingest_cmd) {
      rules.excluded_categories.insert(excluded.begin(), excluded.end());
      if (max_elements > 0) rules.max_elements = max_elements;
      return run_ingest(dir, out, rules);
    }
    if (*train_cmd) {
      cfg.seed = seed;
      cfg.validation_fraction = 1.0 - split;
      return run_train(index, out, cfg, report_path);
    }
    if (*embed_cmd) return run_embed(index, weights, out);
    if (*score_cmd) return run_score(layout, index);
    if (*rec_cmd) {
      ropt.min_rating = min_rating;
      ropt.category = category;
      return run_recommend(layout, index, weights, ropt);
    }
    if (*att_cmd) return run_attention(layout, png);
    if (*serve_cmd) return run_serve(index, weights, host, port);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const CorruptionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
