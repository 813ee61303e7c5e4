#include "lexitransfer/workspace.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lexitransfer/error.hpp"
#include "lexitransfer/json_io.hpp"

namespace lexitransfer {

namespace {

using json = nlohmann::json;

Language require_language(const json& body, const char* key,
                          std::optional<Language> fallback = std::nullopt) {
  if (!body.contains(key)) {
    if (fallback) return *fallback;
    throw Error(ErrorCode::BadRequest, std::string("missing '") + key + "'");
  }
  auto lang = parse_language(body.at(key).get<std::string>());
  if (!lang) throw Error(ErrorCode::BadRequest, std::string("bad '") + key + "'");
  return *lang;
}

std::vector<std::filesystem::path> paths_of(const json& body) {
  std::vector<std::filesystem::path> out;
  if (body.contains("paths"))
    for (const auto& p : body["paths"]) out.emplace_back(p.get<std::string>());
  return out;
}

std::vector<std::string> texts_of(const json& body) {
  std::vector<std::string> out;
  if (body.contains("texts"))
    for (const auto& t : body["texts"]) out.push_back(t.get<std::string>());
  return out;
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileUnreadable, "cannot read " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_atomic(const std::filesystem::path& file, const std::string& content) {
  const auto tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw Error(ErrorCode::FileUnreadable, "cannot write " + tmp);
  }
  std::filesystem::rename(tmp, file);
}

// Attribute inputs each entry panel offers, besides lemma and paradigm.
std::vector<std::string> panel_attributes(Language lang, PosName pos) {
  if (lang == Language::LT) {
    switch (pos) {
      case PosName::Noun: return {"gender"};
      case PosName::Verb: return {"aspect"};
      case PosName::Preposition: return {"governs"};
      default: return {};
    }
  }
  if (pos == PosName::Verb) return {"transitivity"};
  return {};
}

}  // namespace

std::string_view queue_status_name(QueueStatus s) noexcept {
  switch (s) {
    case QueueStatus::Pending: return "pending";
    case QueueStatus::Entered: return "entered";
    case QueueStatus::Rejected: return "rejected";
  }
  return "pending";
}

Workspace::Workspace(Options options) : options_(std::move(options)) {
  const auto& cfg = options_.config;
  cfg.cache.validate();
  rule_pack_ = std::make_shared<const RulePack>(RulePack::load_many(
      {cfg.resources / "rules" / "lt.jsonl", cfg.resources / "rules" / "en.jsonl"}));
  if (options_.data_dir) {
    lexicon_ = Lexicon::open(*options_.data_dir, rule_pack_, cfg.cache);
  } else {
    lexicon_ = std::make_unique<Lexicon>(rule_pack_, cfg.cache);
  }
  if (options_.seed_starter && lexicon_->lexeme_count() == 0 &&
      lexicon_->audit_log().empty()) {
    lexicon_->import_exchange(read_file(cfg.resources / "lexicon" / "starter.jsonl"),
                              "seed");
  }
  for (Direction d : {Direction{Language::EN, Language::LT},
                      Direction{Language::LT, Language::EN}})
    transfer_rules_[direction_code(d)] = TransferRules::load(cfg.resources / "transfer", d);

  budget_ = std::make_shared<QuotaBudget>(cfg.daily_limit, path("budget.state"),
                                          options_.today);
  for (Language lang : kLanguages) {
    auto file = path("corpus-" + std::string(language_code(lang)) + ".idx");
    if (file && std::filesystem::exists(*file))
      corpora_[lang] = std::make_shared<const CorpusIndex>(CorpusIndex::load(*file));
    else
      corpora_[lang] = std::make_shared<const CorpusIndex>(lang, cfg.corpus_order);
  }
  if (cfg.backend == "fixture")
    shared_backend_ = std::make_shared<FixtureBackend>(FixtureBackend::load(cfg.fixture));
  else if (cfg.backend == "remote")
    shared_backend_ = std::make_shared<RemoteBackend>(cfg.remote_url);
  for (Language lang : kLanguages) rebuild_oracle(lang);
  load_queue();
}

std::optional<std::filesystem::path> Workspace::path(const std::string& name) const {
  if (!options_.data_dir) return std::nullopt;
  std::filesystem::create_directories(*options_.data_dir);
  return *options_.data_dir / name;
}

void Workspace::rebuild_oracle(Language lang) {
  std::shared_ptr<CountBackend> backend = shared_backend_;
  if (!backend) backend = std::make_shared<CorpusBackend>(corpora_.at(lang));
  oracles_[lang] = std::make_shared<CountOracle>(backend, budget_, options_.config.cache);
}

std::shared_ptr<CountOracle> Workspace::oracle(Language target) const {
  std::lock_guard lock(mu_);
  return oracles_.at(target);
}

std::shared_ptr<const CorpusIndex> Workspace::corpus(Language lang) const {
  std::lock_guard lock(mu_);
  return corpora_.at(lang);
}

const TransferRules& Workspace::rules(Direction dir) const {
  return transfer_rules_.at(direction_code(dir));
}

// --- lexicon -----------------------------------------------------------------

json Workspace::create_lexeme(const json& body, const std::string& actor) {
  // Entry opened from the data-entry queue: the item must still be pending,
  // and it is marked entered once the lexeme is stored.
  std::optional<std::uint64_t> queue_item;
  if (body.contains("queue_item") && !body["queue_item"].is_null()) {
    queue_item = body["queue_item"].get<std::uint64_t>();
    std::lock_guard lock(mu_);
    auto it = std::find_if(queue_.begin(), queue_.end(),
                           [&](const auto& q) { return q.id == *queue_item; });
    if (it == queue_.end())
      throw Error(ErrorCode::NotFound, "no queue item " + std::to_string(*queue_item));
    if (it->status != QueueStatus::Pending)
      throw Error(ErrorCode::InvalidTransition, "queue item is not pending");
  }
  const auto id = lexicon_->add_lexeme(json_io::new_lexeme_from(body), actor);
  json out{{"lexeme", json_io::lexeme(lexicon_->get(id))},
           {"paradigm", json_io::paradigm(lexicon_->paradigm(id))}};
  if (queue_item) out["queue_item"] = oov_set_status(*queue_item, "entered", actor);
  return out;
}

json Workspace::list_lexemes(Language lang, std::optional<PosName> pos,
                             const std::string& query) const {
  json out = json::array();
  lexicon_->visit_lexemes(lang, {pos, query},
                          [&](const Lexeme& lx) { out.push_back(json_io::lexeme(lx)); });
  return out;
}

json Workspace::get_lexeme(LexemeId id) const {
  return {{"lexeme", json_io::lexeme(lexicon_->get(id))}};
}

json Workspace::delete_lexeme(LexemeId id, const std::string& actor) {
  lexicon_->delete_lexeme(id, actor);
  return {{"deleted", id}};
}

json Workspace::lexeme_paradigm(LexemeId id) const {
  return {{"lexeme", id}, {"forms", json_io::paradigm(lexicon_->paradigm(id))}};
}

json Workspace::preview_paradigm(const json& body) const {
  const auto lemma = body.at("lemma").get<std::string>();
  const auto id = body.at("paradigm").get<std::string>();
  const ParadigmRule* rule = rule_pack_->find(id);
  if (!rule) throw Error(ErrorCode::UnknownParadigm, "no paradigm '" + id + "'");
  return {{"lemma", lemma},
          {"paradigm", id},
          {"language", language_code(rule->pos.language)},
          {"pos", pos_name(rule->pos.name)},
          {"forms", json_io::paradigm(generate_paradigm(lemma, *rule))}};
}

json Workspace::create_link(const json& body, const std::string& actor) {
  std::optional<std::string> domain;
  if (body.contains("domain") && !body["domain"].is_null())
    domain = body["domain"].get<std::string>();
  return json_io::link(lexicon_->link_senses(body.at("source").get<LexemeId>(),
                                             body.at("target").get<LexemeId>(),
                                             body.at("priority").get<int>(),
                                             std::move(domain), actor));
}

json Workspace::delete_link(const json& body, const std::string& actor) {
  const auto source = body.at("source").get<LexemeId>();
  const auto target = body.at("target").get<LexemeId>();
  lexicon_->unlink_senses(source, target, actor);
  return {{"deleted", {{"source", source}, {"target", target}}}};
}

json Workspace::senses(LexemeId id, const std::optional<std::string>& domain) const {
  json out = json::array();
  int rank = 0;
  for (const auto& s : lexicon_->resolve_senses(id, domain)) {
    auto j = json_io::sense(s);
    j["rank"] = ++rank;
    out.push_back(std::move(j));
  }
  return out;
}

json Workspace::create_phrase(const json& body, const std::string& actor) {
  const auto id = lexicon_->add_phrase(json_io::phrase_from(body), actor);
  for (const auto& p : lexicon_->phrases())
    if (p.id == id) return json_io::phrase(p);
  throw Error(ErrorCode::NotFound, "phrase vanished");
}

json Workspace::list_phrases() const {
  json out = json::array();
  for (const auto& p : lexicon_->phrases()) out.push_back(json_io::phrase(p));
  return out;
}

// --- translation -------------------------------------------------------------

TranslateOptions Workspace::parse_options(const json& body, Direction& dir) const {
  dir.from = require_language(body, "from", Language::EN);
  dir.to = require_language(body, "to", dir.from == Language::EN ? Language::LT
                                                                   : Language::EN);
  TranslateOptions opt;
  opt.use_wsd = body.value("use_wsd", false);
  const auto max = body.value("max_variants", std::int64_t{64});
  if (max < 1) throw Error(ErrorCode::BadRequest, "max_variants must be at least 1");
  opt.max_variants = static_cast<std::size_t>(max);
  if (body.contains("domain") && !body["domain"].is_null())
    opt.active_domain = body["domain"].get<std::string>();
  if (body.contains("overrides"))
    for (const auto& [slot, choice] : body["overrides"].items())
      opt.overrides[std::stoul(slot)] = choice.get<std::size_t>();
  return opt;
}

json Workspace::translate(const json& body) {
  Direction dir{Language::EN, Language::LT};
  auto opt = parse_options(body, dir);
  auto text = body.at("text").get<std::string>();
  auto oracle_handle = opt.use_wsd ? oracle(dir.to) : nullptr;
  auto result = lexitransfer::translate(text, dir, opt, *lexicon_, rules(dir),
                                        oracle_handle.get());
  auto out = translate_result(result, dir);
  out["budget"] = {{"day", budget_->state().day},
                   {"used", budget_->state().used},
                   {"daily_limit", budget_->state().daily_limit}};
  return out;
}

json Workspace::retune(const json& body) {
  json forced = body;
  forced["use_wsd"] = false;
  forced["max_variants"] = 1;
  Direction dir{Language::EN, Language::LT};
  auto opt = parse_options(forced, dir);
  auto result = lexitransfer::translate(body.at("text").get<std::string>(), dir, opt,
                                        *lexicon_, rules(dir), nullptr);
  return translate_result(result, dir);
}

json Workspace::translate_result(const TranslateResult& r, Direction dir) {
  std::uint64_t total = 0;
  for (const auto& s : r.scored) total += s.count;
  const bool by_count = r.wsd_applied && !r.fallback;

  json variants = json::array();
  for (std::size_t i = 0; i < r.ranked.size(); ++i) {
    const auto& v = r.ranked[i];
    json slots = json::array();
    for (const auto& s : v.slots) {
      json js{{"source", s.token.original},
              {"surface", s.surface},
              {"dropped", s.dropped},
              {"rank", s.rank}};
      if (s.target) {
        js["target"] = {{"id", s.target->id}, {"lemma", s.target->lemma}};
        js["features"] = to_string(s.features);
      } else {
        js["target"] = nullptr;
      }
      slots.push_back(std::move(js));
    }
    json jv{{"rank", i + 1},
            {"rendered", v.rendered},
            {"sense_priorities", v.sense_priorities},
            {"priority_sum", v.priority_sum()},
            {"slots", std::move(slots)}};
    jv["score"] = v.score ? json(*v.score) : json(nullptr);
    if (by_count && v.score && total > 0)
      jv["likelihood"] = to_string(Likelihood(static_cast<std::int64_t>(*v.score),
                                              static_cast<std::int64_t>(total)));
    else
      jv["likelihood"] = nullptr;
    variants.push_back(std::move(jv));
  }

  json alternatives = json::array();
  for (std::size_t i = 0; i < r.alternatives.size(); ++i) {
    if (r.alternatives[i].empty()) continue;
    json choices = json::array();
    for (std::size_t c = 0; c < r.alternatives[i].size(); ++c) {
      const auto& ch = r.alternatives[i][c];
      choices.push_back({{"index", c},
                         {"target", ch.target.id},
                         {"lemma", ch.target.lemma},
                         {"priority", ch.priority},
                         {"rank", ch.rank}});
    }
    alternatives.push_back(
        {{"slot", i}, {"token", r.tokens[i].original}, {"choices", std::move(choices)}});
  }

  return {{"direction", direction_code(dir)},
          {"ranking", by_count ? "count" : "priority"},
          {"wsd", r.wsd_applied},
          {"fallback", r.fallback},
          {"fallback_reason", r.fallback_reason.empty() ? json(nullptr)
                                                        : json(r.fallback_reason)},
          {"expanded", r.expanded},
          {"variants", std::move(variants)},
          {"alternatives", std::move(alternatives)},
          {"diagnostics", r.diagnostics}};
}

// --- corpus and OOV queue -----------------------------------------------------

json Workspace::ingest(const json& body) {
  const Language lang = require_language(body, "language");
  std::lock_guard lock(mu_);
  auto next = std::make_shared<CorpusIndex>(*corpora_.at(lang));
  IngestReport report = next->ingest(paths_of(body));
  std::size_t n = 0;
  for (const auto& text : texts_of(body)) {
    const auto before = next->token_count();
    if (next->ingest_text(text, "text:" + std::to_string(++n))) {
      ++report.ingested;
      report.tokens += next->token_count() - before;
    } else {
      ++report.skipped;
    }
  }
  if (auto file = path("corpus-" + std::string(language_code(lang)) + ".idx"))
    next->save(*file);
  corpora_[lang] = next;
  if (!shared_backend_)
    oracles_[lang] = std::make_shared<CountOracle>(
        std::make_shared<CorpusBackend>(next), budget_, options_.config.cache);
  return {{"language", language_code(lang)},
          {"ingested", report.ingested},
          {"skipped", report.skipped},
          {"tokens", report.tokens},
          {"token_count", next->token_count()},
          {"ngrams", next->ngrams().size()}};
}

json Workspace::corpus_count(Language lang, const std::string& phrase) const {
  auto index = corpus(lang);
  auto result = index->count_phrase(phrase);
  return {{"language", language_code(lang)},
          {"phrase", phrase},
          {"count", result.count},
          {"degraded", result.degraded}};
}

json Workspace::oov_report(const OovReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"surface", e.surface},
                       {"language", language_code(r.language)},
                       {"frequency", e.frequency},
                       {"contexts", e.contexts}});
  return {{"language", language_code(r.language)},
          {"oov_tokens", r.oov_tokens},
          {"entries", std::move(entries)}};
}

std::optional<PosName> Workspace::suggest_pos(const std::string& surface,
                                              Language lang) const {
  const ParadigmRule* best = nullptr;
  for (const auto& rule : rule_pack_->rules()) {
    if (rule.pos.language != lang || rule.strip.empty()) continue;
    if (surface.size() < rule.strip.size() ||
        surface.compare(surface.size() - rule.strip.size(), rule.strip.size(),
                        rule.strip) != 0)
      continue;
    if (!best || rule.strip.size() > best->strip.size()) best = &rule;
  }
  if (!best) return std::nullopt;
  return best->pos.name;
}

json Workspace::oov_scan(const json& body) {
  const Language lang = require_language(body, "language");
  OovReport report;
  if (body.contains("entries")) {
    report.language = lang;
    for (const auto& e : body["entries"]) {
      OovEntry entry{e.at("surface").get<std::string>(),
                     e.at("frequency").get<std::uint64_t>(),
                     e.value("contexts", std::vector<std::string>{})};
      report.oov_tokens += entry.frequency;
      report.entries.push_back(std::move(entry));
    }
  } else {
    auto texts = texts_of(body);
    for (const auto& p : paths_of(body)) texts.push_back(read_file(p));
    report = extract_oov(texts, lang, *lexicon_);
  }
  if (body.contains("top")) {
    const auto top = body["top"].get<std::size_t>();
    if (report.entries.size() > top) report.entries.resize(top);
  }

  std::size_t queued = 0;
  {
    std::lock_guard lock(mu_);
    for (const auto& e : report.entries) {
      auto it = std::find_if(queue_.begin(), queue_.end(), [&](const auto& q) {
        return q.language == lang && q.surface == e.surface;
      });
      if (it != queue_.end()) {
        if (it->status == QueueStatus::Pending) {
          it->frequency = e.frequency;
          it->contexts = e.contexts;
        }
        continue;
      }
      DataEntryQueueItem item;
      item.id = next_queue_id_++;
      item.surface = e.surface;
      item.language = lang;
      item.frequency = e.frequency;
      item.suggested_pos = suggest_pos(e.surface, lang);
      item.contexts = e.contexts;
      queue_.push_back(std::move(item));
      ++queued;
    }
    save_queue();
  }
  auto out = oov_report(report);
  out["queued"] = queued;
  return out;
}

namespace {

json queue_item(const DataEntryQueueItem& q) {
  return {{"id", q.id},
          {"surface", q.surface},
          {"language", language_code(q.language)},
          {"frequency", q.frequency},
          {"suggested_pos", q.suggested_pos ? json(pos_name(*q.suggested_pos))
                                            : json(nullptr)},
          {"status", queue_status_name(q.status)},
          {"contexts", q.contexts}};
}

std::optional<QueueStatus> parse_status(std::string_view s) {
  if (s == "pending") return QueueStatus::Pending;
  if (s == "entered") return QueueStatus::Entered;
  if (s == "rejected") return QueueStatus::Rejected;
  return std::nullopt;
}

}  // namespace

json Workspace::oov_queue(std::optional<QueueStatus> status) const {
  std::lock_guard lock(mu_);
  std::vector<const DataEntryQueueItem*> items;
  for (const auto& q : queue_)
    if (!status || q.status == *status) items.push_back(&q);
  std::stable_sort(items.begin(), items.end(), [](auto* a, auto* b) {
    if (a->frequency != b->frequency) return a->frequency > b->frequency;
    return a->surface < b->surface;
  });
  json out = json::array();
  for (const auto* q : items) out.push_back(queue_item(*q));
  return out;
}

json Workspace::oov_set_status(std::uint64_t id, const std::string& status,
                               const std::string& /*actor*/) {
  auto next = parse_status(status);
  if (!next) throw Error(ErrorCode::BadRequest, "unknown status '" + status + "'");
  std::lock_guard lock(mu_);
  auto it = std::find_if(queue_.begin(), queue_.end(),
                         [&](const auto& q) { return q.id == id; });
  if (it == queue_.end())
    throw Error(ErrorCode::NotFound, "no queue item " + std::to_string(id));
  if (it->status != QueueStatus::Pending || *next == QueueStatus::Pending)
    throw Error(ErrorCode::InvalidTransition,
                std::string(queue_status_name(it->status)) + " -> " + status +
                    " is not allowed");
  it->status = *next;
  save_queue();
  return queue_item(*it);
}

void Workspace::save_queue() const {
  auto file = path("oov_queue.jsonl");
  if (!file) return;
  std::string content;
  for (const auto& q : queue_) content += queue_item(q).dump() + "\n";
  write_atomic(*file, content);
}

void Workspace::load_queue() {
  auto file = path("oov_queue.jsonl");
  if (!file || !std::filesystem::exists(*file)) return;
  std::istringstream in(read_file(*file));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = json_io::parse(line);
    DataEntryQueueItem q;
    q.id = j.at("id").get<std::uint64_t>();
    q.surface = j.at("surface").get<std::string>();
    q.language = require_language(j, "language");
    q.frequency = j.at("frequency").get<std::uint64_t>();
    if (!j["suggested_pos"].is_null())
      q.suggested_pos = parse_pos_name(j["suggested_pos"].get<std::string>());
    q.status = parse_status(j.at("status").get<std::string>()).value_or(QueueStatus::Pending);
    q.contexts = j.value("contexts", std::vector<std::string>{});
    next_queue_id_ = std::max(next_queue_id_, q.id + 1);
    queue_.push_back(std::move(q));
  }
}

// --- audit, metrics, metadata --------------------------------------------------

json Workspace::audit(std::uint64_t since) const {
  json out = json::array();
  for (const auto& r : lexicon_->audit_log(since)) out.push_back(json_io::change(r));
  return out;
}

std::string Workspace::metrics() const {
  std::ostringstream out;
  auto cache_lines = [&](const std::string& prefix, const CacheStats& s) {
    out << prefix << ".hits " << s.hits << '\n'
        << prefix << ".misses " << s.misses << '\n'
        << prefix << ".evictions " << s.evictions << '\n'
        << prefix << ".resident_bytes " << s.resident_bytes << '\n'
        << prefix << ".entries " << s.entries << '\n';
  };
  out << "cache.total_size_bytes " << options_.config.cache.total_size_bytes << '\n'
      << "cache.per_entry_limit_bytes " << options_.config.cache.per_entry_limit_bytes
      << '\n'
      << "cache.enabled " << (options_.config.cache.enabled ? "true" : "false") << '\n';
  cache_lines("lookup_cache", lexicon_->lookup_cache_stats());
  for (Language lang : kLanguages)
    cache_lines("count_cache." + std::string(language_code(lang)),
                oracle(lang)->cache_stats());
  const auto b = budget_->state();
  out << "budget.day " << b.day << '\n'
      << "budget.used " << b.used << '\n'
      << "budget.daily_limit " << b.daily_limit << '\n'
      << "wsd.backend " << options_.config.backend << '\n'
      << "lexicon.lexemes " << lexicon_->lexeme_count() << '\n'
      << "lexicon.phrases " << lexicon_->phrase_count() << '\n';
  for (Language lang : kLanguages)
    out << "corpus." << language_code(lang) << ".tokens "
        << corpus(lang)->token_count() << '\n';
  return out.str();
}

json Workspace::pos_panels(Language lang) const {
  json out = json::array();
  for (PosName pos : pos_inventory(lang)) {
    json paradigms = json::array();
    for (const auto* rule : rule_pack_->for_pos({lang, pos}))
      paradigms.push_back({{"id", rule->id},
                           {"forms", licensed_bundles(rule->pos).size()}});
    out.push_back({{"language", language_code(lang)},
                   {"pos", pos_name(pos)},
                   {"paradigms", std::move(paradigms)},
                   {"attributes", panel_attributes(lang, pos)},
                   {"domains", pos == PosName::Noun}});
  }
  return out;
}

json Workspace::validate_rules() const {
  json diags = json::array();
  for (const auto& d : rule_pack_->validate()) diags.push_back(json_io::diagnostic(d));
  return {{"diagnostics", std::move(diags)}};
}

std::string Workspace::export_exchange() const { return lexicon_->export_exchange(); }

json Workspace::import_exchange(const std::string& text, const std::string& actor) {
  return {{"imported", lexicon_->import_exchange(text, actor)}};
}

}  // namespace lexitransfer
