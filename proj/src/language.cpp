#include "lexitransfer/language.hpp"

#include <algorithm>

namespace lexitransfer {

namespace {

constexpr std::array<PosName, 11> kLtPos{
    PosName::Noun,        PosName::Adjective,   PosName::Numeral,
    PosName::Pronoun,     PosName::Verb,        PosName::Adverb,
    PosName::Preposition, PosName::Conjunction, PosName::Particle,
    PosName::Interjection, PosName::Onomatopoeia};

constexpr std::array<PosName, 12> kEnPos{
    PosName::Noun,        PosName::Adjective,    PosName::Numeral,
    PosName::Pronoun,     PosName::Verb,         PosName::Adverb,
    PosName::Preposition, PosName::Conjunction,  PosName::Particle,
    PosName::Interjection, PosName::Onomatopoeia, PosName::Auxiliary};

constexpr std::array<std::string_view, 12> kPosNames{
    "noun",        "adjective",   "numeral",  "pronoun",
    "verb",        "adverb",      "preposition", "conjunction",
    "particle",    "interjection", "onomatopoeia", "auxiliary"};

}  // namespace

std::string_view language_code(Language lang) noexcept {
  return lang == Language::LT ? "lt" : "en";
}

std::optional<Language> parse_language(std::string_view code) noexcept {
  if (code == "lt" || code == "LT") return Language::LT;
  if (code == "en" || code == "EN") return Language::EN;
  return std::nullopt;
}

std::string_view pos_name(PosName pos) noexcept {
  return kPosNames[static_cast<std::size_t>(pos)];
}

std::optional<PosName> parse_pos_name(std::string_view name) noexcept {
  auto it = std::find(kPosNames.begin(), kPosNames.end(), name);
  if (it == kPosNames.end()) return std::nullopt;
  return static_cast<PosName>(it - kPosNames.begin());
}

std::span<const PosName> pos_inventory(Language lang) noexcept {
  if (lang == Language::LT) return kLtPos;
  return kEnPos;
}

bool pos_valid_for(Language lang, PosName pos) noexcept {
  auto inv = pos_inventory(lang);
  return std::find(inv.begin(), inv.end(), pos) != inv.end();
}

std::string direction_code(Direction dir) {
  return std::string(language_code(dir.from)) + "-" +
         std::string(language_code(dir.to));
}

}  // namespace lexitransfer
