#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lexitransfer/cache.hpp"
#include "lexitransfer/features.hpp"
#include "lexitransfer/language.hpp"
#include "lexitransfer/morphology.hpp"

namespace lexitransfer {

using LexemeId = std::uint64_t;
using PhraseId = std::uint64_t;

struct Lexeme {
  LexemeId id = 0;
  Language language = Language::LT;
  std::string lemma;
  PartOfSpeech pos{Language::LT, PosName::Noun};
  std::string paradigm_id;
  std::map<std::string, std::string> attributes;
  std::set<std::string> domains;

  friend bool operator==(const Lexeme&, const Lexeme&) = default;
};

struct NewLexeme {
  std::string lemma;
  Language language = Language::LT;
  PosName pos = PosName::Noun;
  std::string paradigm_id;
  std::map<std::string, std::string> attributes;
  std::set<std::string> domains;
};

struct MorphForm {
  LexemeId lexeme_id = 0;
  FeatureBundle features;
  std::string surface;
};

struct SenseLink {
  LexemeId source = 0;
  LexemeId target = 0;
  int priority = 1;
  std::optional<std::string> domain;

  friend bool operator==(const SenseLink&, const SenseLink&) = default;
};

struct ResolvedSense {
  Lexeme target;
  int priority = 1;
  std::optional<std::string> domain;
};

/// Phrase dictionary entry. The pattern holds lemma strings, never lexeme
/// ids, so the phrase store is independent of the word store.
struct PhraseEntry {
  PhraseId id = 0;
  Language source_language = Language::EN;
  std::vector<std::string> source_pattern;
  std::string target_text;
  int priority = 1;

  friend bool operator==(const PhraseEntry&, const PhraseEntry&) = default;
};

enum class ChangeOp { Create, Update, Delete };
std::string_view change_op_name(ChangeOp op) noexcept;

struct EntityRef {
  std::string kind;  // lexeme, link, phrase, forms
  std::string id;

  friend bool operator==(const EntityRef&, const EntityRef&) = default;
};

/// Audit entry: who touched what. Holds a reference, never the data.
struct ChangeRecord {
  std::uint64_t seq = 0;
  std::string actor;
  std::string timestamp;  // ISO 8601 UTC
  EntityRef entity;
  ChangeOp op = ChangeOp::Create;

  friend bool operator==(const ChangeRecord&, const ChangeRecord&) = default;
};

struct LexemeFilter {
  std::optional<PosName> pos;
  std::string query;  // case-folded substring of the lemma; empty matches all
};

/// Persistence hook. The lexicon appends every committed mutation to the
/// journal and every audit record to the audit log.
class LexiconStorage {
 public:
  virtual ~LexiconStorage() = default;
  virtual void append_journal(const std::string& line) = 0;
  virtual void append_audit(const std::string& line) = 0;
};

/// Journal and audit log as two append-only JSON Lines files in a directory.
class FileStorage final : public LexiconStorage {
 public:
  explicit FileStorage(std::filesystem::path dir);
  void append_journal(const std::string& line) override;
  void append_audit(const std::string& line) override;

  std::filesystem::path journal_path() const { return dir_ / "lexicon.jsonl"; }
  std::filesystem::path audit_path() const { return dir_ / "audit.jsonl"; }

 private:
  std::filesystem::path dir_;
};

/// Bilingual lexicon store.
///
/// Reads may run concurrently; mutations are serialized through one writer
/// lock. Every returned value is a copy. Surface lookups go through a
/// read-through cache that every mutation clears.
class Lexicon {
 public:
  using Clock = std::function<std::chrono::system_clock::time_point()>;

  explicit Lexicon(std::shared_ptr<const RulePack> rules,
                   CacheConfig lookup_cache = {},
                   std::unique_ptr<LexiconStorage> storage = nullptr,
                   Clock clock = nullptr);

  /// Opens a directory-backed lexicon, replaying its journal and audit log.
  static std::unique_ptr<Lexicon> open(const std::filesystem::path& dir,
                                       std::shared_ptr<const RulePack> rules,
                                       CacheConfig lookup_cache = {},
                                       Clock clock = nullptr);

  Lexicon(const Lexicon&) = delete;
  Lexicon& operator=(const Lexicon&) = delete;

  LexemeId add_lexeme(const NewLexeme& entry, const std::string& actor);
  void delete_lexeme(LexemeId id, const std::string& actor);

  SenseLink link_senses(LexemeId source, LexemeId target, int priority,
                        std::optional<std::string> domain,
                        const std::string& actor);
  void unlink_senses(LexemeId source, LexemeId target,
                     const std::string& actor);

  /// Translations of `source`: links tagged with `active_domain` first, then
  /// the rest; ascending priority inside each group.
  std::vector<ResolvedSense> resolve_senses(
      LexemeId source,
      const std::optional<std::string>& active_domain = std::nullopt) const;
  std::vector<SenseLink> links_from(LexemeId source) const;

  MorphForm lookup_form(LexemeId id, const FeatureBundle& features) const;
  std::vector<Analysis> lookup_surface(std::string_view surface,
                                       Language lang) const;
  Paradigm paradigm(LexemeId id) const;

  Lexeme get(LexemeId id) const;
  std::optional<Lexeme> find(LexemeId id) const;
  std::optional<LexemeId> find_id(Language lang, std::string_view lemma,
                                  PosName pos) const;

  /// Streams matching lexemes in id order while holding a read lock.
  void visit_lexemes(Language lang, const LexemeFilter& filter,
                     const std::function<void(const Lexeme&)>& fn) const;
  std::vector<Lexeme> list_lexemes(Language lang,
                                   const LexemeFilter& filter = {}) const;
  std::size_t lexeme_count() const;

  PhraseId add_phrase(const PhraseEntry& entry, const std::string& actor);
  void delete_phrase(PhraseId id, const std::string& actor);
  std::vector<PhraseEntry> phrases() const;
  std::size_t phrase_count() const;

  std::vector<ChangeRecord> audit_log(std::uint64_t since_seq = 0) const;

  /// Regenerates every stored form from `rules`. Returns ids whose paradigm
  /// could not be regenerated (their old forms are dropped).
  std::vector<LexemeId> reindex(std::shared_ptr<const RulePack> rules,
                                const std::string& actor);

  /// Lexicon exchange: JSON Lines with `lexeme`, `link` and `phrase`
  /// records, sorted by kind then id.
  std::string export_exchange() const;
  /// Imports records preserving their ids. Returns the number of records.
  std::size_t import_exchange(std::string_view text, const std::string& actor);

  std::shared_ptr<const RulePack> rules() const;
  CacheStats lookup_cache_stats() const { return lookup_cache_.stats(); }

 private:
  struct Record {
    Lexeme lexeme;
    Paradigm forms;
  };

  // Unlocked internals, shared by the public API and journal replay.
  LexemeId apply_add(Lexeme lexeme);
  void apply_delete(LexemeId id);
  SenseLink apply_link(SenseLink link);
  void apply_unlink(LexemeId source, LexemeId target);
  PhraseId apply_phrase(PhraseEntry entry);
  void apply_delete_phrase(PhraseId id);
  void index_forms(const Record& rec);
  void unindex_forms(const Record& rec);
  const Record& record(LexemeId id) const;
  void commit(const std::string& journal_line, ChangeOp op, EntityRef entity,
              const std::string& actor);
  void replay(std::string_view journal, std::string_view audit);

  std::shared_ptr<const RulePack> rules_;
  std::unique_ptr<LexiconStorage> storage_;
  Clock clock_;

  mutable std::shared_mutex mu_;
  std::map<LexemeId, Record> lexemes_;
  std::unordered_set<std::string> unique_keys_;
  std::unordered_map<std::string, std::vector<Analysis>> surface_index_;
  std::map<LexemeId, std::map<int, SenseLink>> links_;
  std::unordered_map<LexemeId, std::set<LexemeId>> incoming_;
  std::map<PhraseId, PhraseEntry> phrases_;
  std::vector<ChangeRecord> audit_;
  LexemeId next_lexeme_id_ = 1;
  PhraseId next_phrase_id_ = 1;

  mutable ReadThroughCache<std::vector<Analysis>> lookup_cache_;
};

}  // namespace lexitransfer
