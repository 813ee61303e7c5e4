#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lexitransfer/features.hpp"
#include "lexitransfer/lexicon.hpp"
#include "lexitransfer/text.hpp"

namespace lexitransfer {

/// One source token with its analyses. OOV slots have no analyses.
struct Slot {
  Token token;
  std::vector<Analysis> analyses;
  std::optional<Lexeme> head;  // lexeme of the first analysis
  bool oov = false;
};

std::vector<Slot> build_slots(const std::vector<Token>& tokens, Language lang,
                              const Lexicon& lexicon);

/// A candidate translation of one slot.
struct SenseChoice {
  Lexeme source;
  FeatureBundle source_features;
  Lexeme target;
  int priority = 1;  // stored link priority
  int rank = 1;      // 1-based position in the slot's resolved order
};

/// Per-slot alternatives in resolve order (domain group first, then
/// priority). Empty for punctuation, OOV and untranslatable words.
std::vector<std::vector<SenseChoice>> slot_alternatives(
    const std::vector<Slot>& slots, const Lexicon& lexicon,
    const std::optional<std::string>& active_domain);

struct VariantSlot {
  Token token;
  std::size_t source_index = 0;
  std::optional<Lexeme> source;  // first analysis, when the word is known
  FeatureBundle source_features;
  std::optional<Lexeme> target;  // empty: passthrough
  FeatureBundle features;        // target bundle, set by tune_endings
  std::string surface;           // rendered piece, set by tune_endings
  int rank = 0;                  // 0 for passthrough
  bool dropped = false;

  bool translated() const noexcept { return target.has_value(); }
};

struct TranslationVariant {
  std::vector<VariantSlot> slots;
  std::string rendered;
  std::vector<int> sense_priorities;  // one rank per translated slot
  std::optional<std::uint64_t> score;

  int priority_sum() const noexcept;
};

/// Strict ordering used whenever counts say nothing: ascending priority
/// sum, then lexicographic on the per-slot priority vector.
bool priority_less(const TranslationVariant& a, const TranslationVariant& b);

/// Best-first enumeration of the cross product of slot alternatives,
/// truncated to `max_variants`.
std::vector<TranslationVariant> expand_variants(
    const std::vector<Slot>& slots,
    const std::vector<std::vector<SenseChoice>>& alternatives,
    std::size_t max_variants);

// --- rule files ----------------------------------------------------------

/// Pattern element. Grammar (one string per element):
///   pos:NAME     target part of speech (source POS for untranslated words)
///   lemma:TEXT   target lemma
///   srcpos:NAME  source part of speech
///   src:TEXT     source lemma, or the folded surface of an unknown word
///   punct        punctuation token
///   oov          unknown word
///   *            anything
/// A trailing `?` marks the element optional.
struct Predicate {
  enum class Kind { Any, Pos, Lemma, SourcePos, SourceLemma, Punct, Oov };
  Kind kind = Kind::Any;
  std::string value;
  bool optional = false;
};

Predicate parse_predicate(std::string_view text);
bool predicate_matches(const Predicate& p, const VariantSlot& slot);

/// Slot index for each pattern element (empty for an absent optional
/// element) of the first match starting at `from` or later.
std::optional<std::vector<std::optional<std::size_t>>> match_pattern(
    const std::vector<Predicate>& pattern, const std::vector<VariantSlot>& slots,
    std::size_t from, std::size_t* match_start = nullptr,
    std::size_t* match_end = nullptr);

struct SyntaxRule {
  enum class Kind { Forbid, Reorder };
  std::string id;
  Kind kind = Kind::Forbid;
  std::vector<Predicate> pattern;
  std::vector<std::size_t> permutation;  // reorder only
};

/// `{"id":..,"kind":"forbid"|"reorder","pattern":[..],"permutation":[..]}`
std::vector<SyntaxRule> parse_syntax_rules(std::string_view text);
std::vector<SyntaxRule> load_syntax_rules(const std::filesystem::path& file);

/// Absent when a forbid rule matches; otherwise reorder rules are applied
/// in order, each once at its leftmost match.
std::optional<TranslationVariant> apply_syntax_rules(
    TranslationVariant variant, const std::vector<SyntaxRule>& rules);

struct AgreementRule {
  enum class Kind { Assign, Drop };
  Kind kind = Kind::Assign;
  std::vector<Predicate> pattern;               // assign
  std::size_t target = 0;                       // assign
  FeatureBundle set;                            // assign
  std::map<std::string, std::size_t> copy;      // feature -> element index
  Predicate when;                               // drop
};

/// `{"kind":"assign","pattern":[..],"target":i,"set":{..},"copy":{..}}` or
/// `{"kind":"drop","when":"srcpos:auxiliary"}`.
std::vector<AgreementRule> parse_agreement_rules(std::string_view text);
std::vector<AgreementRule> load_agreement_rules(const std::filesystem::path& file);

/// Maps requested features onto a bundle licensed for `pos`: features the
/// POS does not use are dropped, missing ones take defaults (nominative,
/// singular, third person, present, positive). Returns the request as-is
/// when no licensed bundle agrees with it.
FeatureBundle fit_bundle(const FeatureBundle& requested, PartOfSpeech pos);

/// Assigns target bundles from source features and agreement rules,
/// renders every translated slot through `lookup_form` and detokenizes.
/// Throws Error(NoSuchForm) when a demanded form is missing.
TranslationVariant tune_endings(TranslationVariant variant, Direction dir,
                                const std::vector<AgreementRule>& rules,
                                const Lexicon& lexicon);

/// Rendering only: capitalization and spacing from the current slots.
std::string render(const std::vector<VariantSlot>& slots, Language target);

}  // namespace lexitransfer
