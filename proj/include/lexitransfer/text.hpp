#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lexitransfer/language.hpp"

namespace lexitransfer {

bool is_valid_utf8(std::string_view text) noexcept;

/// Locale-aware lowercase (Lithuanian rules for LT). Diacritics preserved.
std::string fold_case(std::string_view text, Language lang);
std::string to_upper(std::string_view text, Language lang);
/// Uppercases the first code point only.
std::string capitalize_first(std::string_view text, Language lang);

enum class TokenKind { Word, Punctuation };
enum class Capitalization { Lower, Initial, AllCaps };

struct Token {
  std::string surface;   // case-folded
  std::string original;  // as written
  std::size_t position = 0;
  TokenKind kind = TokenKind::Word;
  Capitalization capitalization = Capitalization::Lower;
  bool space_before = false;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Splits text into word and punctuation tokens. Words are maximal runs of
/// letters and digits, with apostrophes and hyphens allowed between them.
/// Every other non-space code point is its own punctuation token.
std::vector<Token> tokenize(std::string_view text, Language lang);

/// Joins rendered pieces: no space before closing punctuation, none after
/// opening punctuation, single spaces otherwise.
std::string detokenize(const std::vector<std::string>& pieces);

bool is_sentence_final(std::string_view punct) noexcept;
bool is_numeric_word(std::string_view word) noexcept;

/// Reapplies the recorded capitalization to a rendered word.
std::string apply_capitalization(std::string_view word, Capitalization cap,
                                 Language lang);

}  // namespace lexitransfer
