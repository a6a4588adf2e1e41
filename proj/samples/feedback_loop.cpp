// Builds a small synthetic template corpus in memory, then asks for feedback
// on a layout the way the design studio does after every edit.

#include <iostream>

#include "guicomp/guicomp.hpp"

int main(int argc, char** argv) {
  using namespace guicomp;
  const Corpus corpus = synth::synthesize_corpus(300, 11);

  synth::Rng rng(5);
  const LayoutDocument doc =
      argc > 1 ? parse_any_layout(read_file(argv[1])) : synth::synthesize_layout(rng, "draft");

  RecommendOptions opt;
  opt.seed = 2024;
  const auto bundle = assemble_feedback(doc, corpus, opt, BaselineSaliencyModel{});

  std::cout << "overall rating " << bundle.report.overall << "\n";
  if (bundle.percentiles) {
    for (auto m : kAllMetrics)
      std::cout << "  " << to_string(m) << " at percentile "
                << (*bundle.percentiles)[static_cast<std::size_t>(m)] << "\n";
  }
  for (const auto& r : bundle.recommendations)
    std::cout << (r.is_random ? "random  " : "similar ") << r.entry_id << "  d=" << r.distance
              << "  overall=" << r.report.overall << "\n";
  std::cout << "took " << bundle.timing.total_ms << " ms\n";
}
