#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lexitransfer/lexicon.hpp"
#include "lexitransfer/transfer.hpp"
#include "lexitransfer/wsd.hpp"

namespace lexitransfer {

struct TransferRules {
  std::vector<SyntaxRule> syntax;
  std::vector<AgreementRule> agreement;

  /// Reads `<dir>/<from>-<to>.syntax.jsonl` and `.agreement.jsonl`; missing
  /// files mean no rules of that kind.
  static TransferRules load(const std::filesystem::path& dir, Direction dir_);
};

struct TranslateOptions {
  std::optional<std::string> active_domain;
  std::size_t max_variants = 64;
  bool use_wsd = false;
  /// Forced choice per slot index (index into that slot's alternatives).
  std::map<std::size_t, std::size_t> overrides;
};

struct TranslateResult {
  std::vector<TranslationVariant> ranked;
  std::vector<ScoredVariant> scored;  // empty unless WSD ran
  std::vector<Token> tokens;
  std::vector<std::vector<SenseChoice>> alternatives;
  std::vector<std::string> diagnostics;
  std::size_t expanded = 0;  // variants before filtering and tuning
  bool wsd_applied = false;
  bool fallback = false;
  std::string fallback_reason;
};

/// tokenize -> analyze -> expand -> syntax filter -> tune -> rank.
/// With WSD the ranking is by corpus count (see score_and_select);
/// otherwise by ascending priority sum. Throws Error(EmptyInput) when the
/// text has no tokens.
TranslateResult translate(std::string_view text, Direction dir,
                          const TranslateOptions& options, const Lexicon& lexicon,
                          const TransferRules& rules, CountOracle* oracle);

}  // namespace lexitransfer
