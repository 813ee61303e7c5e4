#include "lexitransfer/text.hpp"

#include <unicode/locid.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>

namespace lexitransfer {

namespace {

const icu::Locale& locale_for(Language lang) {
  static const icu::Locale lt("lt");
  static const icu::Locale en("en");
  return lang == Language::LT ? lt : en;
}

std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

bool is_word_char(UChar32 c) {
  return u_isalnum(c) || u_hasBinaryProperty(c, UCHAR_ALPHABETIC) ||
         u_charType(c) == U_NON_SPACING_MARK;
}

bool is_joiner(UChar32 c) {
  return c == '\'' || c == '-' || c == 0x2019 /* ’ */;
}

struct CodePoint {
  UChar32 value;
  std::size_t begin;
  std::size_t end;
};

std::vector<CodePoint> decode(std::string_view text) {
  std::vector<CodePoint> out;
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    out.push_back({c, static_cast<std::size_t>(start),
                   static_cast<std::size_t>(i)});
  }
  return out;
}

Capitalization classify(std::string_view word) {
  int letters = 0, upper = 0;
  bool first_upper = false;
  bool first = true;
  for (const auto& cp : decode(word)) {
    if (!u_isalpha(cp.value)) continue;
    ++letters;
    bool up = u_isupper(cp.value) || u_istitle(cp.value);
    if (up) ++upper;
    if (first) first_upper = up;
    first = false;
  }
  if (letters > 1 && upper == letters) return Capitalization::AllCaps;
  if (first_upper) return Capitalization::Initial;
  return Capitalization::Lower;
}

bool is_closing(std::string_view p) {
  static const std::vector<std::string_view> closing{
      ".", ",", ";", ":", "!", "?", ")", "]", "}", "…", "“", "”", "%"};
  return std::find(closing.begin(), closing.end(), p) != closing.end();
}

bool is_opening(std::string_view p) {
  static const std::vector<std::string_view> opening{"(", "[", "{", "„"};
  return std::find(opening.begin(), opening.end(), p) != opening.end();
}

}  // namespace

bool is_valid_utf8(std::string_view text) noexcept {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) return false;
  }
  return true;
}

std::string fold_case(std::string_view text, Language lang) {
  auto s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  s.toLower(locale_for(lang));
  return to_utf8(s);
}

std::string to_upper(std::string_view text, Language lang) {
  auto s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  s.toUpper(locale_for(lang));
  return to_utf8(s);
}

std::string capitalize_first(std::string_view text, Language lang) {
  if (text.empty()) return {};
  auto cps = decode(text);
  std::string head = to_upper(text.substr(0, cps.front().end), lang);
  return head + std::string(text.substr(cps.front().end));
}

std::vector<Token> tokenize(std::string_view text, Language lang) {
  std::vector<Token> tokens;
  const auto cps = decode(text);
  bool pending_space = false;
  std::size_t i = 0;
  auto emit = [&](std::size_t begin, std::size_t end, TokenKind kind) {
    Token t;
    t.original = std::string(text.substr(begin, end - begin));
    t.kind = kind;
    t.position = tokens.size();
    t.space_before = pending_space && !tokens.empty();
    if (kind == TokenKind::Word) {
      t.capitalization = classify(t.original);
      t.surface = fold_case(t.original, lang);
    } else {
      t.surface = t.original;
    }
    tokens.push_back(std::move(t));
    pending_space = false;
  };
  while (i < cps.size()) {
    UChar32 c = cps[i].value;
    if (u_isUWhiteSpace(c) || c < 0) {
      pending_space = true;
      ++i;
      continue;
    }
    if (is_word_char(c)) {
      std::size_t j = i + 1;
      while (j < cps.size()) {
        if (is_word_char(cps[j].value)) {
          ++j;
        } else if (is_joiner(cps[j].value) && j + 1 < cps.size() &&
                   is_word_char(cps[j + 1].value)) {
          j += 2;
        } else {
          break;
        }
      }
      emit(cps[i].begin, cps[j - 1].end, TokenKind::Word);
      i = j;
      continue;
    }
    emit(cps[i].begin, cps[i].end, TokenKind::Punctuation);
    ++i;
  }
  return tokens;
}

std::string detokenize(const std::vector<std::string>& pieces) {
  std::string out;
  bool suppress_next = true;
  for (const auto& p : pieces) {
    if (p.empty()) continue;
    if (!suppress_next && !is_closing(p)) out += ' ';
    out += p;
    suppress_next = is_opening(p);
  }
  return out;
}

bool is_sentence_final(std::string_view p) noexcept {
  return p == "." || p == "!" || p == "?" || p == "…";
}

bool is_numeric_word(std::string_view word) noexcept {
  bool digit = false;
  for (const auto& cp : decode(word)) {
    if (u_isdigit(cp.value)) digit = true;
    else if (!is_joiner(cp.value)) return false;
  }
  return digit;
}

std::string apply_capitalization(std::string_view word, Capitalization cap,
                                 Language lang) {
  switch (cap) {
    case Capitalization::Lower: return std::string(word);
    case Capitalization::Initial: return capitalize_first(word, lang);
    case Capitalization::AllCaps: return to_upper(word, lang);
  }
  return std::string(word);
}

}  // namespace lexitransfer
