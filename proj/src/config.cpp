#include "lexitransfer/config.hpp"

#include <charconv>
#include <fstream>

#include "lexitransfer/error.hpp"

namespace lexitransfer {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::uint64_t to_uint(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || end != v.data() + v.size())
    throw Error(ErrorCode::BadRequest,
                std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCode::BadRequest, std::string(key) + ": expected a boolean");
}

}  // namespace

Config::Config()
    : fixture(std::filesystem::path(LEXITRANSFER_DATA_DIR) / "fixtures" / "counts.tsv"),
      resources(LEXITRANSFER_DATA_DIR) {}

void Config::set(std::string_view key, std::string_view value) {
  if (key == "cache.total_size_bytes") cache.total_size_bytes = to_uint(key, value);
  else if (key == "cache.per_entry_limit_bytes") cache.per_entry_limit_bytes = to_uint(key, value);
  else if (key == "cache.enabled") cache.enabled = to_bool(key, value);
  else if (key == "wsd.backend") {
    if (value != "fixture" && value != "corpus" && value != "remote")
      throw Error(ErrorCode::BadRequest, "wsd.backend must be fixture, corpus or remote");
    backend = std::string(value);
  } else if (key == "wsd.fixture") fixture = std::string(value);
  else if (key == "wsd.remote_url") remote_url = std::string(value);
  else if (key == "wsd.daily_limit") daily_limit = to_uint(key, value);
  else if (key == "corpus.order") corpus_order = to_uint(key, value);
  else if (key == "resources") resources = std::string(value);
  else throw Error(ErrorCode::BadRequest, "unknown config key " + std::string(key));
}

Config Config::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::FileUnreadable, "cannot read " + file.string());
  Config config;
  std::string line;
  while (std::getline(in, line)) {
    auto s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::BadRequest, "config line without '=': " + line);
    config.set(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  }
  config.cache.validate();
  return config;
}

}  // namespace lexitransfer
