#include "lexitransfer/corpus.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "lexitransfer/error.hpp"
#include "lexitransfer/lexicon.hpp"

namespace lexitransfer {

namespace {

constexpr char kMagic[4] = {'L', 'X', 'C', 'I'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kContextRadius = 3;
constexpr std::size_t kMaxContexts = 3;

std::string join(std::span<const std::string> words) {
  std::string key;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) key += ' ';
    key += words[i];
  }
  return key;
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileUnreadable, "cannot read " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}
  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
  std::uint32_t u32() {
    auto b = take(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(b[i]);
    return v;
  }
  std::uint64_t u64() {
    auto b = take(8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(b[i]);
    return v;
  }
  std::string str() { return std::string(take(u32())); }
  std::string_view take(std::size_t n) {
    if (pos_ + n > data_.size())
      throw Error(ErrorCode::ParseError, "corpus index file is truncated");
    auto out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

std::string snippet(const std::vector<Token>& segment, std::size_t i) {
  const std::size_t begin = i >= kContextRadius ? i - kContextRadius : 0;
  const std::size_t end = std::min(segment.size(), i + kContextRadius + 1);
  std::string out;
  for (std::size_t k = begin; k < end; ++k) {
    if (k > begin) out += ' ';
    out += segment[k].original;
  }
  return out;
}

OovReport finish(Language lang, std::map<std::string, OovEntry>& found,
                 std::uint64_t oov_tokens) {
  OovReport report;
  report.language = lang;
  report.oov_tokens = oov_tokens;
  for (auto& [_, e] : found) report.entries.push_back(std::move(e));
  std::sort(report.entries.begin(), report.entries.end(),
            [](const OovEntry& a, const OovEntry& b) {
              if (a.frequency != b.frequency) return a.frequency > b.frequency;
              return a.surface < b.surface;
            });
  return report;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::vector<std::vector<Token>> segment_sentences(std::string_view text,
                                                  Language lang) {
  std::vector<std::vector<Token>> out(1);
  for (auto& tok : tokenize(text, lang)) {
    if (tok.kind == TokenKind::Word) {
      out.back().push_back(std::move(tok));
    } else if (is_sentence_final(tok.surface) && !out.back().empty()) {
      out.emplace_back();
    }
  }
  if (out.back().empty()) out.pop_back();
  return out;
}

CorpusIndex::CorpusIndex(Language lang, std::size_t order)
    : lang_(lang), order_(order) {
  if (order_ == 0) throw Error(ErrorCode::BadRequest, "n-gram order must be >= 1");
}

IngestReport CorpusIndex::ingest(const std::vector<std::filesystem::path>& files) {
  IngestReport report;
  for (const auto& file : files) {
    const auto before = token_count_;
    if (ingest_text(read_file(file), file.string())) {
      ++report.ingested;
      report.tokens += token_count_ - before;
    } else {
      ++report.skipped;
    }
  }
  return report;
}

bool CorpusIndex::ingest_text(std::string_view text, std::string source) {
  if (!is_valid_utf8(text))
    throw Error(ErrorCode::EncodingError, source + " is not valid UTF-8");
  auto digest = sha256_hex(text);
  for (const auto& m : manifest_)
    if (m.digest == digest) return false;
  std::uint64_t tokens = 0;
  for (const auto& segment : segment_sentences(text, lang_)) {
    std::vector<std::string> words;
    words.reserve(segment.size());
    for (const auto& t : segment) words.push_back(t.surface);
    tokens += words.size();
    add_segment(words);
  }
  token_count_ += tokens;
  manifest_.push_back({std::move(digest), std::move(source), tokens});
  return true;
}

void CorpusIndex::add_segment(const std::vector<std::string>& words) {
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::string key;
    for (std::size_t n = 0; n < order_ && i + n < words.size(); ++n) {
      if (n) key += ' ';
      key += words[i + n];
      ++ngrams_[key];
    }
  }
}

std::uint64_t CorpusIndex::count_tokens(std::span<const std::string> tokens) const {
  auto it = ngrams_.find(join(tokens));
  return it == ngrams_.end() ? 0 : it->second;
}

CountResult CorpusIndex::count_phrase(std::string_view phrase) const {
  std::vector<std::string> words;
  for (auto& tok : tokenize(phrase, lang_))
    if (tok.kind == TokenKind::Word) words.push_back(std::move(tok.surface));
  if (words.empty())
    throw Error(ErrorCode::BadRequest, "phrase has no words");
  if (words.size() <= order_) return {count_tokens(words), false};
  std::uint64_t best = UINT64_MAX;
  for (std::size_t i = 0; i + order_ <= words.size(); ++i)
    best = std::min(best, count_tokens(std::span(words).subspan(i, order_)));
  return {best, true};
}

void CorpusIndex::save(const std::filesystem::path& file) const {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::FileUnreadable, "cannot write " + file.string());
  Writer w(out);
  out.write(kMagic, 4);
  w.u32(kVersion);
  w.u8(lang_ == Language::LT ? 0 : 1);
  w.u32(static_cast<std::uint32_t>(order_));
  w.u64(token_count_);
  w.u32(static_cast<std::uint32_t>(manifest_.size()));
  for (const auto& m : manifest_) {
    w.str(m.digest);
    w.str(m.source);
    w.u64(m.tokens);
  }
  std::vector<const std::pair<const std::string, std::uint64_t>*> sorted;
  sorted.reserve(ngrams_.size());
  for (const auto& kv : ngrams_) sorted.push_back(&kv);
  std::sort(sorted.begin(), sorted.end(),
            [](auto* a, auto* b) { return a->first < b->first; });
  w.u64(sorted.size());
  for (const auto* kv : sorted) {
    w.str(kv->first);
    w.u64(kv->second);
  }
  if (!out) throw Error(ErrorCode::FileUnreadable, "write failed: " + file.string());
}

CorpusIndex CorpusIndex::load(const std::filesystem::path& file) {
  const auto data = read_file(file);
  Reader r(data);
  if (r.take(4) != std::string_view(kMagic, 4))
    throw Error(ErrorCode::ParseError, file.string() + " is not a corpus index");
  if (r.u32() != kVersion)
    throw Error(ErrorCode::ParseError, "unsupported corpus index version");
  const Language lang = r.u8() == 0 ? Language::LT : Language::EN;
  CorpusIndex index(lang, r.u32());
  index.token_count_ = r.u64();
  const auto manifest_size = r.u32();
  for (std::uint32_t i = 0; i < manifest_size; ++i) {
    ManifestEntry m;
    m.digest = r.str();
    m.source = r.str();
    m.tokens = r.u64();
    index.manifest_.push_back(std::move(m));
  }
  const auto ngram_count = r.u64();
  index.ngrams_.reserve(ngram_count);
  for (std::uint64_t i = 0; i < ngram_count; ++i) {
    auto key = r.str();
    index.ngrams_[std::move(key)] = r.u64();
  }
  return index;
}

void CorpusIndex::dump_text(std::ostream& out) const {
  std::map<std::string, std::uint64_t> sorted(ngrams_.begin(), ngrams_.end());
  for (const auto& [key, count] : sorted) out << count << '\t' << key << '\n';
}

OovReport extract_oov(const std::vector<std::string>& texts, Language lang,
                      const Lexicon& lexicon) {
  std::map<std::string, OovEntry> found;
  std::uint64_t oov_tokens = 0;
  for (const auto& text : texts) {
    if (!is_valid_utf8(text))
      throw Error(ErrorCode::EncodingError, "corpus text is not valid UTF-8");
    for (const auto& segment : segment_sentences(text, lang)) {
      for (std::size_t i = 0; i < segment.size(); ++i) {
        const auto& tok = segment[i];
        if (is_numeric_word(tok.surface)) continue;
        if (!lexicon.lookup_surface(tok.surface, lang).empty()) continue;
        ++oov_tokens;
        auto& entry = found[tok.surface];
        entry.surface = tok.surface;
        ++entry.frequency;
        if (entry.contexts.size() < kMaxContexts)
          entry.contexts.push_back(snippet(segment, i));
      }
    }
  }
  return finish(lang, found, oov_tokens);
}

OovReport extract_oov_files(const std::vector<std::filesystem::path>& files,
                            Language lang, const Lexicon& lexicon) {
  std::vector<std::string> texts;
  texts.reserve(files.size());
  for (const auto& f : files) texts.push_back(read_file(f));
  return extract_oov(texts, lang, lexicon);
}

OovReport extract_oov(const CorpusIndex& index, const Lexicon& lexicon) {
  std::map<std::string, OovEntry> found;
  std::uint64_t oov_tokens = 0;
  for (const auto& [key, count] : index.ngrams()) {
    if (key.find(' ') != std::string::npos) continue;
    if (is_numeric_word(key)) continue;
    if (!lexicon.lookup_surface(key, index.language()).empty()) continue;
    oov_tokens += count;
    found[key] = OovEntry{key, count, {}};
  }
  return finish(index.language(), found, oov_tokens);
}

}  // namespace lexitransfer
