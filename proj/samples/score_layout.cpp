// Scores one layout and writes its attention heatmap next to it.
//
//   score_layout layouts/login.json [heatmap.png]

#include <iostream>

#include "guicomp/guicomp.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: score_layout <layout.json> [heatmap.png]\n";
    return 1;
  }
  try {
    const auto doc = guicomp::parse_any_layout(guicomp::read_file(argv[1]));
    const auto report = guicomp::evaluate(doc);
    for (auto m : guicomp::kAllMetrics)
      std::cout << guicomp::to_string(m) << "\t" << report.get(m) << "\n";
    std::cout << "overall\t" << report.overall << "\n";

    for (const auto& s : guicomp::dominant_palette(doc, 5))
      std::cout << guicomp::to_hex(s.rgb) << "\t" << s.weight << "\n";

    if (argc > 2) {
      const auto map = guicomp::attention_map(doc, guicomp::BaselineSaliencyModel{});
      guicomp::write_file(argv[2], guicomp::render_heatmap_png(map));
    }
  } catch (const guicomp::Error& e) {
    std::cerr << e.code() << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
