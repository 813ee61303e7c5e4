#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "lexitransfer/cache.hpp"

namespace lexitransfer {

/// Runtime settings. The file format is `key = value` per line, `#`
/// comments. Recognized keys:
///
///   cache.total_size_bytes       default 26214400
///   cache.per_entry_limit_bytes  default 1048576
///   cache.enabled                default true
///   wsd.backend                  fixture | corpus | remote (default fixture)
///   wsd.fixture                  fixture file (default data/fixtures/counts.tsv)
///   wsd.remote_url               base URL for the remote adapter
///   wsd.daily_limit              default 1000
///   corpus.order                 default 5
///   resources                    rule/lexicon data directory
struct Config {
  CacheConfig cache;
  std::string backend = "fixture";
  std::filesystem::path fixture;
  std::string remote_url;
  std::uint64_t daily_limit = 1000;
  std::size_t corpus_order = 5;
  std::filesystem::path resources;

  Config();
  static Config load(const std::filesystem::path& file);
  /// Throws Error(BadRequest) for unknown keys or malformed values.
  void set(std::string_view key, std::string_view value);
};

}  // namespace lexitransfer
