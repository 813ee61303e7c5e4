#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lexitransfer/language.hpp"

namespace lexitransfer {

enum class Case : std::uint8_t {
  Nominative,
  Genitive,
  Dative,
  Accusative,
  Instrumental,
  Locative,
  Vocative,
};
enum class Number : std::uint8_t { Sg, Pl };
enum class Person : std::uint8_t { First, Second, Third };
enum class Tense : std::uint8_t { Present, Past, Future };
enum class Mood : std::uint8_t { Indicative, Infinitive };
enum class Degree : std::uint8_t { Positive, Comparative, Superlative };

/// Grammatical feature assignment.
///
/// Field order is the canonical feature order: case, number, person, tense,
/// mood, degree. Comparison is lexicographic in that order with an absent
/// feature sorting before any value, and values sorting in declaration order.
/// The canonical text form lists present features in the same order as
/// `name=value` pairs joined by commas, e.g. `case=genitive,number=sg`;
/// the empty bundle serializes to the empty string.
struct FeatureBundle {
  std::optional<Case> case_;
  std::optional<Number> number;
  std::optional<Person> person;
  std::optional<Tense> tense;
  std::optional<Mood> mood;
  std::optional<Degree> degree;

  bool empty() const noexcept {
    return !case_ && !number && !person && !tense && !mood && !degree;
  }

  friend bool operator==(const FeatureBundle&, const FeatureBundle&) = default;
  friend auto operator<=>(const FeatureBundle&, const FeatureBundle&) = default;
};

std::string to_string(const FeatureBundle& bundle);

/// Parses the canonical form. Also accepts features in any order and the
/// `name:value` separator; throws Error(ParseError) on unknown names/values.
FeatureBundle parse_bundle(std::string_view text);

/// Sets one feature by name. Returns false when name or value is unknown.
bool set_feature(FeatureBundle& bundle, std::string_view name,
                 std::string_view value);

/// Value of a feature by name, or empty when absent/unknown.
std::optional<std::string> get_feature(const FeatureBundle& bundle,
                                       std::string_view name);

/// Names in canonical order.
const std::vector<std::string_view>& feature_names();

/// Every value name a feature admits, in canonical value order.
const std::vector<std::string_view>& feature_values(std::string_view name);

/// Feature bundles licensed for a part of speech, in canonical order.
///
///   LT noun, pronoun      case x number                      (14)
///   LT adjective          case x number x degree             (42)
///   LT verb               tense{3} x person x number + inf   (19)
///   EN noun               number                             (2)
///   EN adjective          degree                             (3)
///   EN verb               tense{present,past} x person x number + inf (13)
///   everything else       the empty bundle                   (1)
const std::vector<FeatureBundle>& licensed_bundles(PartOfSpeech pos);

bool is_licensed(PartOfSpeech pos, const FeatureBundle& bundle);

}  // namespace lexitransfer
