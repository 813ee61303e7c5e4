#include "lexitransfer/translator.hpp"

#include <algorithm>

#include "lexitransfer/error.hpp"

namespace lexitransfer {

TransferRules TransferRules::load(const std::filesystem::path& dir, Direction d) {
  TransferRules rules;
  const auto stem = direction_code(d);
  const auto syntax = dir / (stem + ".syntax.jsonl");
  const auto agreement = dir / (stem + ".agreement.jsonl");
  if (std::filesystem::exists(syntax)) rules.syntax = load_syntax_rules(syntax);
  if (std::filesystem::exists(agreement))
    rules.agreement = load_agreement_rules(agreement);
  return rules;
}

TranslateResult translate(std::string_view text, Direction dir,
                          const TranslateOptions& options, const Lexicon& lexicon,
                          const TransferRules& rules, CountOracle* oracle) {
  if (dir.from == dir.to)
    throw Error(ErrorCode::BadRequest, "source and target language are the same");
  TranslateResult result;
  result.tokens = tokenize(text, dir.from);
  if (result.tokens.empty())
    throw Error(ErrorCode::EmptyInput, "nothing to translate");

  const auto slots = build_slots(result.tokens, dir.from, lexicon);
  result.alternatives = slot_alternatives(slots, lexicon, options.active_domain);

  auto alternatives = result.alternatives;
  for (const auto& [slot, choice] : options.overrides) {
    if (slot >= alternatives.size() || choice >= alternatives[slot].size())
      throw Error(ErrorCode::BadRequest,
                  "override " + std::to_string(slot) + ":" + std::to_string(choice) +
                      " does not name an alternative");
    alternatives[slot] = {alternatives[slot][choice]};
  }

  auto expanded = expand_variants(slots, alternatives, options.max_variants);
  result.expanded = expanded.size();

  std::vector<TranslationVariant> tuned;
  for (auto& v : expanded) {
    auto kept = apply_syntax_rules(std::move(v), rules.syntax);
    if (!kept) continue;
    try {
      tuned.push_back(tune_endings(std::move(*kept), dir, rules.agreement, lexicon));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoSuchForm) throw;
      result.diagnostics.emplace_back(e.what());
    }
  }
  if (tuned.empty()) return result;

  if (options.use_wsd && oracle) {
    auto sel = score_and_select(tuned, *oracle);
    result.wsd_applied = true;
    result.fallback = sel.fallback;
    result.fallback_reason = sel.fallback_reason;
    for (auto idx : sel.ranking) result.ranked.push_back(sel.scored[idx].variant);
    result.scored = std::move(sel.scored);
  } else {
    std::stable_sort(tuned.begin(), tuned.end(), priority_less);
    result.ranked = std::move(tuned);
  }
  return result;
}

}  // namespace lexitransfer
