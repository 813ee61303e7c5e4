#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>

#include "lexitransfer/lexicon.hpp"
#include "lexitransfer/morphology.hpp"

namespace testsupport {

namespace fs = std::filesystem;
using namespace lexitransfer;

inline fs::path data_dir() { return LEXITRANSFER_DATA_DIR; }
inline fs::path golden_dir() { return LEXITRANSFER_GOLDEN_DIR; }

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
}

inline std::shared_ptr<const RulePack> shipped_rules() {
  static auto pack = std::make_shared<const RulePack>(RulePack::load_many(
      {data_dir() / "rules" / "lt.jsonl", data_dir() / "rules" / "en.jsonl"}));
  return pack;
}

inline std::unique_ptr<Lexicon> starter_lexicon(CacheConfig cache = {}) {
  auto lx = std::make_unique<Lexicon>(shipped_rules(), cache);
  lx->import_exchange(read_file(data_dir() / "lexicon" / "starter.jsonl"), "seed");
  return lx;
}

// Scratch directory removed on destruction.
struct TempDir {
  fs::path path;
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path = fs::temp_directory_path() /
           ("lexitransfer-test-" + std::to_string(rng()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

}  // namespace testsupport
