#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexitransfer/config.hpp"
#include "lexitransfer/corpus.hpp"
#include "lexitransfer/lexicon.hpp"
#include "lexitransfer/translator.hpp"
#include "lexitransfer/wsd.hpp"

namespace lexitransfer {

enum class QueueStatus { Pending, Entered, Rejected };
std::string_view queue_status_name(QueueStatus s) noexcept;

/// OOV word waiting for a lexicographer.
struct DataEntryQueueItem {
  std::uint64_t id = 0;
  std::string surface;
  Language language = Language::LT;
  std::uint64_t frequency = 0;
  std::optional<PosName> suggested_pos;
  QueueStatus status = QueueStatus::Pending;
  std::vector<std::string> contexts;
};

/// Everything the service and CLI operate on: lexicon, rules, corpus
/// indexes, count oracles and the data-entry queue. Each public method
/// returns the JSON document the HTTP endpoint of the same name answers
/// with, so both front ends serialize identically.
///
/// With a data directory the state lives in:
///   lexicon.jsonl audit.jsonl   lexicon journal and audit log
///   oov_queue.jsonl             data-entry queue
///   corpus-<lang>.idx           n-gram indexes
///   budget.state                query budget
class Workspace {
 public:
  using json = nlohmann::json;

  struct Options {
    std::optional<std::filesystem::path> data_dir;  // in-memory when empty
    Config config;
    bool seed_starter = false;  // import the starter lexicon into an empty store
    QuotaBudget::DayClock today;  // test hook
  };

  explicit Workspace(Options options);

  json create_lexeme(const json& body, const std::string& actor);
  json list_lexemes(Language lang, std::optional<PosName> pos,
                    const std::string& query) const;
  json get_lexeme(LexemeId id) const;
  json delete_lexeme(LexemeId id, const std::string& actor);
  json lexeme_paradigm(LexemeId id) const;
  json preview_paradigm(const json& body) const;
  json create_link(const json& body, const std::string& actor);
  json delete_link(const json& body, const std::string& actor);
  json senses(LexemeId id, const std::optional<std::string>& domain) const;
  json create_phrase(const json& body, const std::string& actor);
  json list_phrases() const;

  json translate(const json& body);
  json retune(const json& body);

  json ingest(const json& body);
  json corpus_count(Language lang, const std::string& phrase) const;
  json oov_scan(const json& body);
  json oov_queue(std::optional<QueueStatus> status) const;
  json oov_set_status(std::uint64_t id, const std::string& status,
                      const std::string& actor);

  json audit(std::uint64_t since) const;
  std::string metrics() const;
  json pos_panels(Language lang) const;
  json validate_rules() const;

  std::string export_exchange() const;
  json import_exchange(const std::string& text, const std::string& actor);

  Lexicon& lexicon() noexcept { return *lexicon_; }
  const Lexicon& lexicon() const noexcept { return *lexicon_; }
  const TransferRules& rules(Direction dir) const;
  std::shared_ptr<CountOracle> oracle(Language target) const;
  std::shared_ptr<const CorpusIndex> corpus(Language lang) const;
  const Config& config() const noexcept { return options_.config; }

  static json translate_result(const TranslateResult& r, Direction dir);
  static json oov_report(const OovReport& r);

 private:
  std::optional<std::filesystem::path> path(const std::string& name) const;
  void rebuild_oracle(Language lang);
  void save_queue() const;
  void load_queue();
  std::optional<PosName> suggest_pos(const std::string& surface, Language lang) const;
  TranslateOptions parse_options(const json& body, Direction& dir) const;

  Options options_;
  std::shared_ptr<const RulePack> rule_pack_;
  std::unique_ptr<Lexicon> lexicon_;
  std::map<std::string, TransferRules> transfer_rules_;
  std::shared_ptr<QuotaBudget> budget_;
  std::shared_ptr<CountBackend> shared_backend_;

  mutable std::mutex mu_;  // corpus, oracles, queue
  std::map<Language, std::shared_ptr<const CorpusIndex>> corpora_;
  std::map<Language, std::shared_ptr<CountOracle>> oracles_;
  std::vector<DataEntryQueueItem> queue_;
  std::uint64_t next_queue_id_ = 1;
};

}  // namespace lexitransfer
