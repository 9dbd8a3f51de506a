// Library walkthrough: parse two pages, look at their body views, and print
// every kernel similarity next to the baselines.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tkndd/tkndd.hpp"

static std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tkndd::Error(std::string("cannot open ") + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: compare_pages a.html b.html\n";
    return 2;
  }
  try {
    const tkndd::DomTree a = tkndd::parse_html(read_file(argv[1]), argv[1]);
    const tkndd::DomTree b = tkndd::parse_html(read_file(argv[2]), argv[2]);
    std::cout << "a: " << a.node_count() << " elements\n"
              << "   " << tkndd::to_bracket(tkndd::apply_strategy(a, tkndd::ReprStrategy::OnlyBodyNoScripts))
              << "\n";

    const tkndd::SimilarityVector v = tkndd::similarity_vector(a, b, tkndd::KernelParams{});
    for (std::size_t i = 0; i < tkndd::kFeatureCount; ++i)
      std::printf("%-28s %.4f\n", tkndd::feature_name(i).c_str(), v.values[i]);
    for (tkndd::BaselineKind k : tkndd::kAllBaselines)
      std::printf("%-28s %.4f\n", std::string(tkndd::to_string(k)).c_str(),
                  tkndd::baseline_similarity(k, a, b));
  } catch (const tkndd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
