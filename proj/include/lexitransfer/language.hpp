#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace lexitransfer {

enum class Language { LT, EN };

inline constexpr std::array<Language, 2> kLanguages{Language::LT, Language::EN};

std::string_view language_code(Language lang) noexcept;  // "lt" / "en"
std::optional<Language> parse_language(std::string_view code) noexcept;

enum class PosName {
  Noun,
  Adjective,
  Numeral,
  Pronoun,
  Verb,
  Adverb,
  Preposition,
  Conjunction,
  Particle,
  Interjection,
  Onomatopoeia,
  // English only: auxiliary words and determiners share one entry panel.
  Auxiliary,
};

std::string_view pos_name(PosName pos) noexcept;
std::optional<PosName> parse_pos_name(std::string_view name) noexcept;

struct PartOfSpeech {
  Language language;
  PosName name;

  friend bool operator==(const PartOfSpeech&, const PartOfSpeech&) = default;
  friend auto operator<=>(const PartOfSpeech&, const PartOfSpeech&) = default;
};

/// Inventory of parts of speech for a language: 11 for LT, 12 for EN.
std::span<const PosName> pos_inventory(Language lang) noexcept;

bool pos_valid_for(Language lang, PosName pos) noexcept;

struct Direction {
  Language from;
  Language to;

  friend bool operator==(const Direction&, const Direction&) = default;
};

std::string direction_code(Direction dir);  // "en-lt"

}  // namespace lexitransfer
