#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexitransfer/language.hpp"
#include "lexitransfer/text.hpp"

namespace lexitransfer {

class Lexicon;

/// Word tokens of `text` grouped into sentences. Sentence-final punctuation
/// closes a segment; other punctuation is skipped.
std::vector<std::vector<Token>> segment_sentences(std::string_view text,
                                                  Language lang);

struct CountResult {
  std::uint64_t count = 0;
  bool degraded = false;  // phrase longer than the index order
};

struct ManifestEntry {
  std::string digest;  // SHA-256 of the file bytes, hex
  std::string source;  // path or label at ingest time
  std::uint64_t tokens = 0;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct IngestReport {
  std::size_t ingested = 0;
  std::size_t skipped = 0;  // already in the manifest
  std::uint64_t tokens = 0;
};

/// Exact n-gram counts (orders 1..N) over a monolingual corpus.
///
/// N-grams never cross sentence boundaries. Re-ingesting content whose
/// digest is already in the manifest changes nothing.
///
/// Binary layout (all integers little-endian):
///   "LXCI"  u32 version=1  u8 language(0=lt,1=en)  u32 order
///   u64 token_count
///   u32 manifest_size, then per entry: str digest, str source, u64 tokens
///   u64 ngram_count, then per n-gram sorted by key: str key, u64 count
/// where `str` is a u32 byte length followed by UTF-8 bytes and an n-gram
/// key is its tokens joined by single spaces.
class CorpusIndex {
 public:
  explicit CorpusIndex(Language lang, std::size_t order = 5);

  IngestReport ingest(const std::vector<std::filesystem::path>& files);
  /// Returns false when the text was already ingested.
  bool ingest_text(std::string_view text, std::string source = "<text>");

  /// Throws Error(BadRequest) when the phrase has no word tokens.
  CountResult count_phrase(std::string_view phrase) const;
  std::uint64_t count_tokens(std::span<const std::string> tokens) const;

  Language language() const noexcept { return lang_; }
  std::size_t order() const noexcept { return order_; }
  std::uint64_t token_count() const noexcept { return token_count_; }
  const std::vector<ManifestEntry>& manifest() const noexcept { return manifest_; }
  const std::unordered_map<std::string, std::uint64_t>& ngrams() const noexcept {
    return ngrams_;
  }

  void save(const std::filesystem::path& file) const;
  static CorpusIndex load(const std::filesystem::path& file);
  /// `count<TAB>ngram` lines sorted by n-gram.
  void dump_text(std::ostream& out) const;

 private:
  void add_segment(const std::vector<std::string>& words);

  Language lang_;
  std::size_t order_;
  std::uint64_t token_count_ = 0;
  std::vector<ManifestEntry> manifest_;
  std::unordered_map<std::string, std::uint64_t> ngrams_;
};

std::string sha256_hex(std::string_view bytes);

struct OovEntry {
  std::string surface;
  std::uint64_t frequency = 0;
  std::vector<std::string> contexts;  // at most three snippets

  friend bool operator==(const OovEntry&, const OovEntry&) = default;
};

struct OovReport {
  Language language = Language::LT;
  std::vector<OovEntry> entries;  // frequency desc, then surface asc
  std::uint64_t oov_tokens = 0;
};

/// Words of the texts that have no analysis in the lexicon. Numerals and
/// punctuation are never reported.
OovReport extract_oov(const std::vector<std::string>& texts, Language lang,
                      const Lexicon& lexicon);
OovReport extract_oov_files(const std::vector<std::filesystem::path>& files,
                            Language lang, const Lexicon& lexicon);
/// Index-only variant: frequencies from unigram counts, no contexts.
OovReport extract_oov(const CorpusIndex& index, const Lexicon& lexicon);

}  // namespace lexitransfer
