#include "lexitransfer/morphology.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lexitransfer/error.hpp"
#include "lexitransfer/lexicon.hpp"

namespace lexitransfer {

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

std::string_view stem_of(std::string_view lemma, const ParadigmRule& rule) {
  if (!ends_with(lemma, rule.strip)) {
    throw Error(ErrorCode::StemMismatch, "lemma '" + std::string(lemma) +
                                             "' does not end in '" +
                                             rule.strip + "' required by " +
                                             rule.id);
  }
  return lemma.substr(0, lemma.size() - rule.strip.size());
}

std::map<FeatureBundle, std::string> parse_table(const nlohmann::json& j) {
  std::map<FeatureBundle, std::string> out;
  if (j.is_null()) return out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    out[parse_bundle(it.key())] = it.value().get<std::string>();
  }
  return out;
}

}  // namespace

Paradigm generate_paradigm(std::string_view lemma, const ParadigmRule& rule) {
  const std::string stem(stem_of(lemma, rule));
  Paradigm out;
  for (const auto& [bundle, ending] : rule.endings) out[bundle] = stem + ending;
  for (const auto& [bundle, surface] : rule.exceptions) out[bundle] = surface;
  return out;
}

std::optional<std::string> generate_form(std::string_view lemma,
                                         const ParadigmRule& rule,
                                         const FeatureBundle& bundle) {
  const auto stem = stem_of(lemma, rule);
  if (auto e = rule.exceptions.find(bundle); e != rule.exceptions.end())
    return e->second;
  if (auto e = rule.endings.find(bundle); e != rule.endings.end())
    return std::string(stem) + e->second;
  return std::nullopt;
}

std::string_view diagnostic_kind_name(RuleDiagnostic::Kind kind) noexcept {
  switch (kind) {
    case RuleDiagnostic::Kind::Incomplete: return "incomplete";
    case RuleDiagnostic::Kind::Duplicate: return "duplicate";
    case RuleDiagnostic::Kind::Unlicensed: return "unlicensed";
  }
  return "unknown";
}

std::vector<RuleDiagnostic> validate_rule_pack(
    const std::vector<ParadigmRule>& pack) {
  std::vector<RuleDiagnostic> out;
  std::set<std::string> seen;
  for (const auto& rule : pack) {
    if (!seen.insert(rule.id).second) {
      out.push_back({RuleDiagnostic::Kind::Duplicate, rule.id,
                     "paradigm id defined more than once"});
    }
    for (const auto& bundle : licensed_bundles(rule.pos)) {
      if (!rule.endings.count(bundle) && !rule.exceptions.count(bundle)) {
        out.push_back({RuleDiagnostic::Kind::Incomplete, rule.id,
                       "missing form for {" + to_string(bundle) + "}"});
      }
    }
    auto check = [&](const std::map<FeatureBundle, std::string>& table,
                     const char* what) {
      for (const auto& [bundle, _] : table) {
        if (!is_licensed(rule.pos, bundle)) {
          out.push_back({RuleDiagnostic::Kind::Unlicensed, rule.id,
                         std::string(what) + " {" + to_string(bundle) +
                             "} not licensed for " +
                             std::string(pos_name(rule.pos.name))});
        }
      }
    };
    check(rule.endings, "ending");
    check(rule.exceptions, "exception");
  }
  return out;
}

RulePack::RulePack(std::vector<ParadigmRule> rules) : rules_(std::move(rules)) {
  for (std::size_t i = 0; i < rules_.size(); ++i)
    index_.try_emplace(rules_[i].id, i);
}

std::vector<ParadigmRule> RulePack::parse(std::string_view text) {
  std::vector<ParadigmRule> rules;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    try {
      auto j = nlohmann::json::parse(line);
      ParadigmRule rule;
      rule.id = j.at("paradigm").get<std::string>();
      auto lang = parse_language(j.at("language").get<std::string>());
      auto pos = parse_pos_name(j.at("pos").get<std::string>());
      if (!lang || !pos || !pos_valid_for(*lang, *pos))
        throw Error(ErrorCode::ParseError, "bad language/pos");
      rule.pos = {*lang, *pos};
      rule.strip = j.value("strip", "");
      rule.endings = parse_table(j.value("endings", nlohmann::json::object()));
      rule.exceptions =
          parse_table(j.value("exceptions", nlohmann::json::object()));
      rules.push_back(std::move(rule));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError,
                  "rule pack line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError,
                  "rule pack line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rules;
}

RulePack RulePack::load(const std::filesystem::path& file) {
  return load_many({file});
}

RulePack RulePack::load_many(const std::vector<std::filesystem::path>& files) {
  std::vector<ParadigmRule> all;
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      throw Error(ErrorCode::FileUnreadable,
                  "cannot read rule pack " + file.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    auto rules = parse(buf.str());
    all.insert(all.end(), std::make_move_iterator(rules.begin()),
               std::make_move_iterator(rules.end()));
  }
  return RulePack(std::move(all));
}

const ParadigmRule* RulePack::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &rules_[it->second];
}

std::vector<const ParadigmRule*> RulePack::for_pos(PartOfSpeech pos) const {
  std::vector<const ParadigmRule*> out;
  for (const auto& r : rules_)
    if (r.pos == pos) out.push_back(&r);
  return out;
}

std::vector<Analysis> analyze(std::string_view surface, Language lang,
                              const Lexicon& lexicon) {
  return lexicon.lookup_surface(surface, lang);
}

}  // namespace lexitransfer
