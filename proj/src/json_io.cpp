#include "lexitransfer/json_io.hpp"

#include "lexitransfer/error.hpp"

namespace lexitransfer::json_io {

namespace {

Language language_from(const json& j) {
  auto lang = parse_language(j.get<std::string>());
  if (!lang) throw Error(ErrorCode::BadRequest, "unknown language " + j.dump());
  return *lang;
}

PosName pos_from(const json& j) {
  auto pos = parse_pos_name(j.get<std::string>());
  if (!pos) throw Error(ErrorCode::BadRequest, "unknown part of speech " + j.dump());
  return *pos;
}

ChangeOp op_from(std::string_view s) {
  if (s == "create") return ChangeOp::Create;
  if (s == "update") return ChangeOp::Update;
  if (s == "delete") return ChangeOp::Delete;
  throw Error(ErrorCode::ParseError, "unknown change op " + std::string(s));
}

}  // namespace

json lexeme(const Lexeme& lx) {
  return {{"kind", "lexeme"},
          {"id", lx.id},
          {"language", language_code(lx.language)},
          {"lemma", lx.lemma},
          {"pos", pos_name(lx.pos.name)},
          {"paradigm", lx.paradigm_id},
          {"attributes", lx.attributes},
          {"domains", lx.domains}};
}

NewLexeme new_lexeme_from(const json& j) {
  NewLexeme n;
  n.lemma = j.at("lemma").get<std::string>();
  n.language = language_from(j.at("language"));
  n.pos = pos_from(j.at("pos"));
  n.paradigm_id = j.at("paradigm").get<std::string>();
  if (j.contains("attributes"))
    n.attributes = j["attributes"].get<std::map<std::string, std::string>>();
  if (j.contains("domains"))
    n.domains = j["domains"].get<std::set<std::string>>();
  return n;
}

Lexeme lexeme_from(const json& j) {
  NewLexeme n = new_lexeme_from(j);
  Lexeme lx;
  lx.id = j.at("id").get<LexemeId>();
  lx.language = n.language;
  lx.lemma = std::move(n.lemma);
  lx.pos = {n.language, n.pos};
  lx.paradigm_id = std::move(n.paradigm_id);
  lx.attributes = std::move(n.attributes);
  lx.domains = std::move(n.domains);
  return lx;
}

json link(const SenseLink& l) {
  json j{{"kind", "link"},
         {"source", l.source},
         {"target", l.target},
         {"priority", l.priority}};
  if (l.domain) j["domain"] = *l.domain;
  return j;
}

SenseLink link_from(const json& j) {
  SenseLink l;
  l.source = j.at("source").get<LexemeId>();
  l.target = j.at("target").get<LexemeId>();
  l.priority = j.at("priority").get<int>();
  if (j.contains("domain") && !j["domain"].is_null())
    l.domain = j["domain"].get<std::string>();
  return l;
}

json phrase(const PhraseEntry& p) {
  return {{"kind", "phrase"},
          {"id", p.id},
          {"language", language_code(p.source_language)},
          {"pattern", p.source_pattern},
          {"target", p.target_text},
          {"priority", p.priority}};
}

PhraseEntry phrase_from(const json& j) {
  PhraseEntry p;
  p.id = j.value("id", PhraseId{0});
  p.source_language = language_from(j.at("language"));
  p.source_pattern = j.at("pattern").get<std::vector<std::string>>();
  p.target_text = j.at("target").get<std::string>();
  p.priority = j.value("priority", 1);
  return p;
}

json change(const ChangeRecord& r) {
  return {{"seq", r.seq},
          {"actor", r.actor},
          {"timestamp", r.timestamp},
          {"entity", {{"kind", r.entity.kind}, {"id", r.entity.id}}},
          {"op", change_op_name(r.op)}};
}

ChangeRecord change_from(const json& j) {
  ChangeRecord r;
  r.seq = j.at("seq").get<std::uint64_t>();
  r.actor = j.at("actor").get<std::string>();
  r.timestamp = j.at("timestamp").get<std::string>();
  r.entity.kind = j.at("entity").at("kind").get<std::string>();
  r.entity.id = j.at("entity").at("id").get<std::string>();
  r.op = op_from(j.at("op").get<std::string>());
  return r;
}

json paradigm(const Paradigm& table) {
  json rows = json::array();
  for (const auto& [bundle, surface] : table)
    rows.push_back({{"features", to_string(bundle)}, {"surface", surface}});
  return rows;
}

json form(const MorphForm& f) {
  return {{"lexeme", f.lexeme_id},
          {"features", to_string(f.features)},
          {"surface", f.surface}};
}

json sense(const ResolvedSense& s) {
  json j{{"target", lexeme(s.target)}, {"priority", s.priority}};
  if (s.domain) j["domain"] = *s.domain;
  return j;
}

json diagnostic(const RuleDiagnostic& d) {
  return {{"kind", diagnostic_kind_name(d.kind)},
          {"paradigm", d.paradigm_id},
          {"detail", d.detail}};
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace lexitransfer::json_io
