#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexitransfer/features.hpp"
#include "lexitransfer/language.hpp"

namespace lexitransfer {

class Lexicon;
struct Lexeme;

using Paradigm = std::map<FeatureBundle, std::string>;

/// Suffix-strip + ending-table inflection rule.
struct ParadigmRule {
  std::string id;
  PartOfSpeech pos{Language::LT, PosName::Noun};
  std::string strip;                          // suffix removed from the lemma
  std::map<FeatureBundle, std::string> endings;
  std::map<FeatureBundle, std::string> exceptions;  // full surface overrides
};

/// Generates every form of `lemma`. Exceptions win over stem + ending.
/// Throws Error(StemMismatch) when the lemma does not end in `rule.strip`.
Paradigm generate_paradigm(std::string_view lemma, const ParadigmRule& rule);

/// Single form, computed without building the whole table.
std::optional<std::string> generate_form(std::string_view lemma,
                                         const ParadigmRule& rule,
                                         const FeatureBundle& bundle);

struct RuleDiagnostic {
  enum class Kind { Incomplete, Duplicate, Unlicensed };
  Kind kind;
  std::string paradigm_id;
  std::string detail;
};

std::string_view diagnostic_kind_name(RuleDiagnostic::Kind kind) noexcept;

std::vector<RuleDiagnostic> validate_rule_pack(
    const std::vector<ParadigmRule>& pack);

/// Immutable collection of paradigm rules, keyed by id.
///
/// File format: JSON Lines, one rule per line:
///   {"paradigm":"lt-noun-as-m","language":"lt","pos":"noun","strip":"as",
///    "endings":{"case=genitive,number=sg":"o",...},"exceptions":{...}}
/// Bundle keys use the canonical feature text form. Blank lines and lines
/// starting with '#' are ignored.
class RulePack {
 public:
  RulePack() = default;
  explicit RulePack(std::vector<ParadigmRule> rules);

  static RulePack load(const std::filesystem::path& file);
  static RulePack load_many(const std::vector<std::filesystem::path>& files);
  static std::vector<ParadigmRule> parse(std::string_view text);

  const ParadigmRule* find(std::string_view id) const;
  const std::vector<ParadigmRule>& rules() const noexcept { return rules_; }
  std::vector<const ParadigmRule*> for_pos(PartOfSpeech pos) const;
  std::vector<RuleDiagnostic> validate() const { return validate_rule_pack(rules_); }

 private:
  std::vector<ParadigmRule> rules_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct Analysis {
  std::uint64_t lexeme_id = 0;
  FeatureBundle features;

  friend bool operator==(const Analysis&, const Analysis&) = default;
  friend auto operator<=>(const Analysis&, const Analysis&) = default;
};

/// Surface analysis through the lexicon's reverse index. Ambiguity is kept;
/// results are ordered by lexeme id, then canonical bundle order.
std::vector<Analysis> analyze(std::string_view surface, Language lang,
                              const Lexicon& lexicon);

}  // namespace lexitransfer
