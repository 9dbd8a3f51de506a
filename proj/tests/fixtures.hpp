#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "synthetic.hpp"

namespace fixtures {

namespace fs = std::filesystem;

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("tkndd-" + tag + "-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void write_file(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << content;
}

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Writes `sets` page sets under dir/pages and a manifest with one clone, one
// near-duplicate and one distinct pair per set. Returns the manifest path.
inline fs::path synthetic_manifest(const fs::path& dir, std::size_t sets, std::uint64_t seed,
                                   const std::string& name = "manifest.csv") {
  std::mt19937_64 rng(seed);
  std::string manifest = "pair_id,file_a,file_b,label\n";
  for (std::size_t i = 0; i < sets; ++i) {
    const auto s = synth::page_set(rng);
    const std::string stem = "pages/" + std::to_string(seed) + "_" + std::to_string(i);
    write_file(dir / (stem + "_base.html"), s.base);
    write_file(dir / (stem + "_clone.html"), s.clone);
    write_file(dir / (stem + "_near.html"), s.near_duplicate);
    write_file(dir / (stem + "_other.html"), s.distinct);
    const std::string id = std::to_string(seed) + "-" + std::to_string(i);
    manifest += id + "c," + stem + "_base.html," + stem + "_clone.html,clone\n";
    manifest += id + "n," + stem + "_base.html," + stem + "_near.html,near_duplicate\n";
    manifest += id + "d," + stem + "_base.html," + stem + "_other.html,distinct\n";
  }
  write_file(dir / name, manifest);
  return dir / name;
}

}  // namespace fixtures
