#include "lexitransfer/lexicon.hpp"

#include <algorithm>
#include <ctime>
#include <fstream>
#include <mutex>
#include <sstream>

#include "lexitransfer/error.hpp"
#include "lexitransfer/json_io.hpp"
#include "lexitransfer/text.hpp"

namespace lexitransfer {

namespace {

std::string unique_key(const Lexeme& lx) {
  std::string key(language_code(lx.language));
  key += '|';
  key += pos_name(lx.pos.name);
  key += '|';
  key += lx.paradigm_id;
  key += '|';
  key += lx.lemma;
  return key;
}

std::string surface_key(Language lang, std::string_view folded) {
  std::string key(language_code(lang));
  key += '\x1f';
  key += folded;
  return key;
}

std::string iso_utc(std::chrono::system_clock::time_point tp) {
  std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::size_t analyses_size(const std::vector<Analysis>& v) {
  std::size_t n = 2;
  for (const auto& a : v)
    n += std::to_string(a.lexeme_id).size() + to_string(a.features).size() + 4;
  return n;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return {};
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty() && line.front() != '#') fn(line);
    pos = nl + 1;
  }
}

}  // namespace

std::string_view change_op_name(ChangeOp op) noexcept {
  switch (op) {
    case ChangeOp::Create: return "create";
    case ChangeOp::Update: return "update";
    case ChangeOp::Delete: return "delete";
  }
  return "update";
}

FileStorage::FileStorage(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

void FileStorage::append_journal(const std::string& line) {
  std::ofstream out(journal_path(), std::ios::app | std::ios::binary);
  out << line << '\n';
  if (!out) throw Error(ErrorCode::FileUnreadable, "journal write failed");
}

void FileStorage::append_audit(const std::string& line) {
  std::ofstream out(audit_path(), std::ios::app | std::ios::binary);
  out << line << '\n';
  if (!out) throw Error(ErrorCode::FileUnreadable, "audit write failed");
}

Lexicon::Lexicon(std::shared_ptr<const RulePack> rules,
                 CacheConfig lookup_cache,
                 std::unique_ptr<LexiconStorage> storage, Clock clock)
    : rules_(std::move(rules)),
      storage_(std::move(storage)),
      clock_(clock ? std::move(clock)
                   : Clock([] { return std::chrono::system_clock::now(); })),
      lookup_cache_(lookup_cache, analyses_size) {
  if (!rules_) rules_ = std::make_shared<RulePack>();
}

std::unique_ptr<Lexicon> Lexicon::open(const std::filesystem::path& dir,
                                       std::shared_ptr<const RulePack> rules,
                                       CacheConfig lookup_cache, Clock clock) {
  auto storage = std::make_unique<FileStorage>(dir);
  const auto journal = read_file(storage->journal_path());
  const auto audit = read_file(storage->audit_path());
  auto lex = std::make_unique<Lexicon>(std::move(rules), lookup_cache,
                                       std::move(storage), std::move(clock));
  lex->replay(journal, audit);
  return lex;
}

void Lexicon::replay(std::string_view journal, std::string_view audit) {
  std::unique_lock lock(mu_);
  for_each_line(journal, [&](std::string_view line) {
    auto j = json_io::parse(line);
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "lexeme") apply_add(json_io::lexeme_from(j));
    else if (kind == "link") apply_link(json_io::link_from(j));
    else if (kind == "phrase") apply_phrase(json_io::phrase_from(j));
    else if (kind == "delete_lexeme") apply_delete(j.at("id").get<LexemeId>());
    else if (kind == "unlink")
      apply_unlink(j.at("source").get<LexemeId>(), j.at("target").get<LexemeId>());
    else if (kind == "delete_phrase")
      apply_delete_phrase(j.at("id").get<PhraseId>());
    else throw Error(ErrorCode::ParseError, "unknown journal record " + kind);
  });
  for_each_line(audit, [&](std::string_view line) {
    audit_.push_back(json_io::change_from(json_io::parse(line)));
  });
  lookup_cache_.invalidate_all();
}

const Lexicon::Record& Lexicon::record(LexemeId id) const {
  auto it = lexemes_.find(id);
  if (it == lexemes_.end())
    throw Error(ErrorCode::NotFound, "no lexeme " + std::to_string(id));
  return it->second;
}

void Lexicon::index_forms(const Record& rec) {
  for (const auto& [bundle, surface] : rec.forms) {
    auto& bucket = surface_index_[surface_key(
        rec.lexeme.language, fold_case(surface, rec.lexeme.language))];
    bucket.push_back({rec.lexeme.id, bundle});
    std::sort(bucket.begin(), bucket.end());
  }
}

void Lexicon::unindex_forms(const Record& rec) {
  for (const auto& [bundle, surface] : rec.forms) {
    auto key = surface_key(rec.lexeme.language,
                           fold_case(surface, rec.lexeme.language));
    auto it = surface_index_.find(key);
    if (it == surface_index_.end()) continue;
    std::erase_if(it->second, [&](const Analysis& a) {
      return a.lexeme_id == rec.lexeme.id;
    });
    if (it->second.empty()) surface_index_.erase(it);
  }
}

LexemeId Lexicon::apply_add(Lexeme lx) {
  if (lx.lemma.empty())
    throw Error(ErrorCode::BadRequest, "lemma must not be empty");
  if (lx.pos.language != lx.language || !pos_valid_for(lx.language, lx.pos.name))
    throw Error(ErrorCode::PosLanguageMismatch,
                std::string(pos_name(lx.pos.name)) + " is not a " +
                    std::string(language_code(lx.language)) + " part of speech");
  const ParadigmRule* rule = rules_->find(lx.paradigm_id);
  if (!rule || rule->pos != lx.pos)
    throw Error(ErrorCode::UnknownParadigm,
                "no paradigm '" + lx.paradigm_id + "' for " +
                    std::string(language_code(lx.language)) + " " +
                    std::string(pos_name(lx.pos.name)));
  Record rec{lx, generate_paradigm(lx.lemma, *rule)};
  const auto key = unique_key(lx);
  if (unique_keys_.count(key))
    throw Error(ErrorCode::DuplicateLexeme, "lexeme already exists: " + key);
  if (rec.lexeme.id == 0) rec.lexeme.id = next_lexeme_id_;
  if (lexemes_.count(rec.lexeme.id))
    throw Error(ErrorCode::DuplicateLexeme,
                "lexeme id " + std::to_string(rec.lexeme.id) + " in use");
  next_lexeme_id_ = std::max(next_lexeme_id_, rec.lexeme.id + 1);
  unique_keys_.insert(key);
  index_forms(rec);
  const LexemeId id = rec.lexeme.id;
  lexemes_.emplace(id, std::move(rec));
  return id;
}

void Lexicon::apply_delete(LexemeId id) {
  const Record& rec = record(id);
  unindex_forms(rec);
  unique_keys_.erase(unique_key(rec.lexeme));
  if (auto out = links_.find(id); out != links_.end()) {
    for (const auto& [_, link] : out->second) incoming_[link.target].erase(id);
    links_.erase(out);
  }
  if (auto in = incoming_.find(id); in != incoming_.end()) {
    for (LexemeId src : in->second) {
      auto& table = links_[src];
      std::erase_if(table, [&](const auto& kv) { return kv.second.target == id; });
      if (table.empty()) links_.erase(src);
    }
    incoming_.erase(in);
  }
  lexemes_.erase(id);
}

SenseLink Lexicon::apply_link(SenseLink link) {
  const auto& src = record(link.source).lexeme;
  const auto& dst = record(link.target).lexeme;
  if (src.language == dst.language)
    throw Error(ErrorCode::SameLanguage, "sense links must cross languages");
  if (link.priority < 1)
    throw Error(ErrorCode::BadRequest, "priority must be positive");
  auto& table = links_[link.source];
  if (table.count(link.priority)) {
    if (table.empty()) links_.erase(link.source);
    throw Error(ErrorCode::PriorityCollision,
                "priority " + std::to_string(link.priority) +
                    " already used by lexeme " + std::to_string(link.source));
  }
  for (const auto& [_, existing] : table) {
    if (existing.target == link.target)
      throw Error(ErrorCode::BadRequest, "lexemes are already linked");
  }
  table.emplace(link.priority, link);
  incoming_[link.target].insert(link.source);
  return link;
}

void Lexicon::apply_unlink(LexemeId source, LexemeId target) {
  auto out = links_.find(source);
  if (out != links_.end()) {
    for (auto it = out->second.begin(); it != out->second.end(); ++it) {
      if (it->second.target != target) continue;
      out->second.erase(it);
      if (out->second.empty()) links_.erase(out);
      incoming_[target].erase(source);
      return;
    }
  }
  throw Error(ErrorCode::NotFound, "no link " + std::to_string(source) +
                                       " -> " + std::to_string(target));
}

PhraseId Lexicon::apply_phrase(PhraseEntry entry) {
  if (entry.source_pattern.empty())
    throw Error(ErrorCode::BadRequest, "phrase pattern must not be empty");
  if (entry.priority < 1)
    throw Error(ErrorCode::BadRequest, "priority must be positive");
  if (entry.id == 0) entry.id = next_phrase_id_;
  if (phrases_.count(entry.id))
    throw Error(ErrorCode::BadRequest,
                "phrase id " + std::to_string(entry.id) + " in use");
  next_phrase_id_ = std::max(next_phrase_id_, entry.id + 1);
  const PhraseId id = entry.id;
  phrases_.emplace(id, std::move(entry));
  return id;
}

void Lexicon::apply_delete_phrase(PhraseId id) {
  if (!phrases_.erase(id))
    throw Error(ErrorCode::NotFound, "no phrase " + std::to_string(id));
}

void Lexicon::commit(const std::string& journal_line, ChangeOp op,
                     EntityRef entity, const std::string& actor) {
  ChangeRecord rec;
  rec.seq = audit_.empty() ? 1 : audit_.back().seq + 1;
  rec.actor = actor;
  rec.timestamp = iso_utc(clock_());
  rec.entity = std::move(entity);
  rec.op = op;
  if (storage_) {
    if (!journal_line.empty()) storage_->append_journal(journal_line);
    storage_->append_audit(json_io::change(rec).dump());
  }
  audit_.push_back(std::move(rec));
  lookup_cache_.invalidate_all();
}

LexemeId Lexicon::add_lexeme(const NewLexeme& entry, const std::string& actor) {
  std::unique_lock lock(mu_);
  Lexeme lx;
  lx.language = entry.language;
  lx.lemma = entry.lemma;
  lx.pos = {entry.language, entry.pos};
  lx.paradigm_id = entry.paradigm_id;
  lx.attributes = entry.attributes;
  lx.domains = entry.domains;
  const LexemeId id = apply_add(std::move(lx));
  commit(storage_ ? json_io::lexeme(lexemes_.at(id).lexeme).dump() : std::string{},
         ChangeOp::Create, {"lexeme", std::to_string(id)}, actor);
  return id;
}

void Lexicon::delete_lexeme(LexemeId id, const std::string& actor) {
  std::unique_lock lock(mu_);
  apply_delete(id);
  commit(nlohmann::json{{"kind", "delete_lexeme"}, {"id", id}}.dump(),
         ChangeOp::Delete, {"lexeme", std::to_string(id)}, actor);
}

SenseLink Lexicon::link_senses(LexemeId source, LexemeId target, int priority,
                               std::optional<std::string> domain,
                               const std::string& actor) {
  std::unique_lock lock(mu_);
  auto link = apply_link({source, target, priority, std::move(domain)});
  commit(json_io::link(link).dump(), ChangeOp::Create,
         {"link", std::to_string(source) + ":" + std::to_string(target)}, actor);
  return link;
}

void Lexicon::unlink_senses(LexemeId source, LexemeId target,
                            const std::string& actor) {
  std::unique_lock lock(mu_);
  apply_unlink(source, target);
  commit(nlohmann::json{{"kind", "unlink"}, {"source", source}, {"target", target}}
             .dump(),
         ChangeOp::Delete,
         {"link", std::to_string(source) + ":" + std::to_string(target)}, actor);
}

std::vector<ResolvedSense> Lexicon::resolve_senses(
    LexemeId source, const std::optional<std::string>& active_domain) const {
  std::shared_lock lock(mu_);
  record(source);
  std::vector<ResolvedSense> out;
  auto it = links_.find(source);
  if (it == links_.end()) return out;
  for (const auto& [priority, link] : it->second)
    out.push_back({record(link.target).lexeme, priority, link.domain});
  if (active_domain) {
    std::stable_partition(out.begin(), out.end(), [&](const ResolvedSense& s) {
      return s.domain == active_domain;
    });
  }
  return out;
}

std::vector<SenseLink> Lexicon::links_from(LexemeId source) const {
  std::shared_lock lock(mu_);
  std::vector<SenseLink> out;
  if (auto it = links_.find(source); it != links_.end())
    for (const auto& [_, link] : it->second) out.push_back(link);
  return out;
}

MorphForm Lexicon::lookup_form(LexemeId id, const FeatureBundle& features) const {
  std::shared_lock lock(mu_);
  const auto& rec = record(id);
  auto it = rec.forms.find(features);
  if (it == rec.forms.end())
    throw Error(ErrorCode::NoSuchForm, "'" + rec.lexeme.lemma + "' has no form {" +
                                           to_string(features) + "}");
  return {id, it->first, it->second};
}

std::vector<Analysis> Lexicon::lookup_surface(std::string_view surface,
                                              Language lang) const {
  const auto key = surface_key(lang, fold_case(surface, lang));
  return lookup_cache_.get_through(key, [this](const std::string& k) {
    std::shared_lock lock(mu_);
    auto it = surface_index_.find(k);
    return it == surface_index_.end() ? std::vector<Analysis>{} : it->second;
  });
}

Paradigm Lexicon::paradigm(LexemeId id) const {
  std::shared_lock lock(mu_);
  return record(id).forms;
}

Lexeme Lexicon::get(LexemeId id) const {
  std::shared_lock lock(mu_);
  return record(id).lexeme;
}

std::optional<Lexeme> Lexicon::find(LexemeId id) const {
  std::shared_lock lock(mu_);
  auto it = lexemes_.find(id);
  if (it == lexemes_.end()) return std::nullopt;
  return it->second.lexeme;
}

std::optional<LexemeId> Lexicon::find_id(Language lang, std::string_view lemma,
                                         PosName pos) const {
  std::shared_lock lock(mu_);
  for (const auto& [id, rec] : lexemes_) {
    if (rec.lexeme.language == lang && rec.lexeme.pos.name == pos &&
        rec.lexeme.lemma == lemma)
      return id;
  }
  return std::nullopt;
}

void Lexicon::visit_lexemes(Language lang, const LexemeFilter& filter,
                            const std::function<void(const Lexeme&)>& fn) const {
  const std::string query = fold_case(filter.query, lang);
  std::shared_lock lock(mu_);
  for (const auto& [_, rec] : lexemes_) {
    const auto& lx = rec.lexeme;
    if (lx.language != lang) continue;
    if (filter.pos && lx.pos.name != *filter.pos) continue;
    if (!query.empty() &&
        fold_case(lx.lemma, lang).find(query) == std::string::npos)
      continue;
    fn(lx);
  }
}

std::vector<Lexeme> Lexicon::list_lexemes(Language lang,
                                          const LexemeFilter& filter) const {
  std::vector<Lexeme> out;
  visit_lexemes(lang, filter, [&](const Lexeme& lx) { out.push_back(lx); });
  return out;
}

std::size_t Lexicon::lexeme_count() const {
  std::shared_lock lock(mu_);
  return lexemes_.size();
}

PhraseId Lexicon::add_phrase(const PhraseEntry& entry, const std::string& actor) {
  std::unique_lock lock(mu_);
  PhraseEntry copy = entry;
  copy.id = 0;
  const PhraseId id = apply_phrase(std::move(copy));
  commit(json_io::phrase(phrases_.at(id)).dump(), ChangeOp::Create,
         {"phrase", std::to_string(id)}, actor);
  return id;
}

void Lexicon::delete_phrase(PhraseId id, const std::string& actor) {
  std::unique_lock lock(mu_);
  apply_delete_phrase(id);
  commit(nlohmann::json{{"kind", "delete_phrase"}, {"id", id}}.dump(),
         ChangeOp::Delete, {"phrase", std::to_string(id)}, actor);
}

std::vector<PhraseEntry> Lexicon::phrases() const {
  std::shared_lock lock(mu_);
  std::vector<PhraseEntry> out;
  out.reserve(phrases_.size());
  for (const auto& [_, p] : phrases_) out.push_back(p);
  return out;
}

std::size_t Lexicon::phrase_count() const {
  std::shared_lock lock(mu_);
  return phrases_.size();
}

std::vector<ChangeRecord> Lexicon::audit_log(std::uint64_t since_seq) const {
  std::shared_lock lock(mu_);
  std::vector<ChangeRecord> out;
  auto it = std::upper_bound(
      audit_.begin(), audit_.end(), since_seq,
      [](std::uint64_t seq, const ChangeRecord& r) { return seq < r.seq; });
  out.assign(it, audit_.end());
  return out;
}

std::vector<LexemeId> Lexicon::reindex(std::shared_ptr<const RulePack> rules,
                                       const std::string& actor) {
  std::unique_lock lock(mu_);
  if (rules) rules_ = std::move(rules);
  std::vector<LexemeId> failed;
  surface_index_.clear();
  for (auto& [id, rec] : lexemes_) {
    rec.forms.clear();
    const ParadigmRule* rule = rules_->find(rec.lexeme.paradigm_id);
    try {
      if (!rule || rule->pos != rec.lexeme.pos)
        throw Error(ErrorCode::UnknownParadigm, rec.lexeme.paradigm_id);
      rec.forms = generate_paradigm(rec.lexeme.lemma, *rule);
    } catch (const Error&) {
      failed.push_back(id);
      continue;
    }
    index_forms(rec);
  }
  commit({}, ChangeOp::Update, {"forms", "*"}, actor);
  return failed;
}

std::string Lexicon::export_exchange() const {
  std::shared_lock lock(mu_);
  std::string out;
  for (const auto& [_, rec] : lexemes_) {
    out += json_io::lexeme(rec.lexeme).dump();
    out += '\n';
  }
  for (const auto& [_, table] : links_)
    for (const auto& [__, link] : table) {
      out += json_io::link(link).dump();
      out += '\n';
    }
  for (const auto& [_, p] : phrases_) {
    out += json_io::phrase(p).dump();
    out += '\n';
  }
  return out;
}

std::size_t Lexicon::import_exchange(std::string_view text,
                                     const std::string& actor) {
  std::vector<nlohmann::json> records;
  for_each_line(text, [&](std::string_view line) {
    records.push_back(json_io::parse(line));
  });
  auto rank = [](const nlohmann::json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "lexeme") return 0;
    if (kind == "link") return 1;
    if (kind == "phrase") return 2;
    throw Error(ErrorCode::ParseError, "unknown exchange record kind " + kind);
  };
  std::stable_sort(records.begin(), records.end(),
                   [&](const auto& a, const auto& b) { return rank(a) < rank(b); });

  std::unique_lock lock(mu_);
  for (const auto& j : records) {
    switch (rank(j)) {
      case 0: {
        const LexemeId id = apply_add(json_io::lexeme_from(j));
        commit(json_io::lexeme(lexemes_.at(id).lexeme).dump(), ChangeOp::Create,
               {"lexeme", std::to_string(id)}, actor);
        break;
      }
      case 1: {
        auto link = apply_link(json_io::link_from(j));
        commit(json_io::link(link).dump(), ChangeOp::Create,
               {"link", std::to_string(link.source) + ":" +
                            std::to_string(link.target)},
               actor);
        break;
      }
      default: {
        const PhraseId id = apply_phrase(json_io::phrase_from(j));
        commit(json_io::phrase(phrases_.at(id)).dump(), ChangeOp::Create,
               {"phrase", std::to_string(id)}, actor);
        break;
      }
    }
  }
  return records.size();
}

std::shared_ptr<const RulePack> Lexicon::rules() const {
  std::shared_lock lock(mu_);
  return rules_;
}

}  // namespace lexitransfer
