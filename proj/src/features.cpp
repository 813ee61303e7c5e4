#include "lexitransfer/features.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "lexitransfer/error.hpp"

namespace lexitransfer {

namespace {

const std::vector<std::string_view> kCaseNames{
    "nominative", "genitive", "dative",  "accusative",
    "instrumental", "locative", "vocative"};
const std::vector<std::string_view> kNumberNames{"sg", "pl"};
const std::vector<std::string_view> kPersonNames{"1", "2", "3"};
const std::vector<std::string_view> kTenseNames{"present", "past", "future"};
const std::vector<std::string_view> kMoodNames{"indicative", "infinitive"};
const std::vector<std::string_view> kDegreeNames{"positive", "comparative",
                                                 "superlative"};
const std::vector<std::string_view> kFeatureNames{"case",  "number", "person",
                                                  "tense", "mood",   "degree"};
const std::vector<std::string_view> kNoValues{};

template <typename E>
std::optional<E> lookup(const std::vector<std::string_view>& names,
                        std::string_view value) {
  auto it = std::find(names.begin(), names.end(), value);
  if (it == names.end()) return std::nullopt;
  return static_cast<E>(it - names.begin());
}

template <typename E>
bool assign(std::optional<E>& slot, const std::vector<std::string_view>& names,
            std::string_view value) {
  auto v = lookup<E>(names, value);
  if (!v) return false;
  slot = *v;
  return true;
}

template <typename E>
void append(std::string& out, std::string_view name, const std::optional<E>& v,
            const std::vector<std::string_view>& names) {
  if (!v) return;
  if (!out.empty()) out += ',';
  out += name;
  out += '=';
  out += names[static_cast<std::size_t>(*v)];
}

std::vector<FeatureBundle> build_licensed(PartOfSpeech pos) {
  std::vector<FeatureBundle> out;
  const bool lt = pos.language == Language::LT;
  auto case_number = [&](std::optional<Degree> degree) {
    for (std::size_t c = 0; c < kCaseNames.size(); ++c)
      for (std::size_t n = 0; n < kNumberNames.size(); ++n) {
        FeatureBundle b;
        b.case_ = static_cast<Case>(c);
        b.number = static_cast<Number>(n);
        b.degree = degree;
        out.push_back(b);
      }
  };
  auto finite = [&](std::size_t tenses) {
    for (std::size_t n = 0; n < kNumberNames.size(); ++n)
      for (std::size_t p = 0; p < kPersonNames.size(); ++p)
        for (std::size_t t = 0; t < tenses; ++t) {
          FeatureBundle b;
          b.number = static_cast<Number>(n);
          b.person = static_cast<Person>(p);
          b.tense = static_cast<Tense>(t);
          out.push_back(b);
        }
    FeatureBundle inf;
    inf.mood = Mood::Infinitive;
    out.push_back(inf);
  };

  switch (pos.name) {
    case PosName::Noun:
      if (lt) {
        case_number(std::nullopt);
      } else {
        for (std::size_t n = 0; n < kNumberNames.size(); ++n) {
          FeatureBundle b;
          b.number = static_cast<Number>(n);
          out.push_back(b);
        }
      }
      break;
    case PosName::Pronoun:
      if (lt) case_number(std::nullopt);
      else out.emplace_back();
      break;
    case PosName::Adjective:
      if (lt) {
        for (std::size_t d = 0; d < kDegreeNames.size(); ++d)
          case_number(static_cast<Degree>(d));
      } else {
        for (std::size_t d = 0; d < kDegreeNames.size(); ++d) {
          FeatureBundle b;
          b.degree = static_cast<Degree>(d);
          out.push_back(b);
        }
      }
      break;
    case PosName::Verb:
      finite(lt ? 3 : 2);
      break;
    default:
      out.emplace_back();
      break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string to_string(const FeatureBundle& b) {
  std::string out;
  append(out, "case", b.case_, kCaseNames);
  append(out, "number", b.number, kNumberNames);
  append(out, "person", b.person, kPersonNames);
  append(out, "tense", b.tense, kTenseNames);
  append(out, "mood", b.mood, kMoodNames);
  append(out, "degree", b.degree, kDegreeNames);
  return out;
}

bool set_feature(FeatureBundle& b, std::string_view name,
                 std::string_view value) {
  if (name == "case") return assign(b.case_, kCaseNames, value);
  if (name == "number") return assign(b.number, kNumberNames, value);
  if (name == "person") return assign(b.person, kPersonNames, value);
  if (name == "tense") return assign(b.tense, kTenseNames, value);
  if (name == "mood") return assign(b.mood, kMoodNames, value);
  if (name == "degree") return assign(b.degree, kDegreeNames, value);
  return false;
}

std::optional<std::string> get_feature(const FeatureBundle& b,
                                       std::string_view name) {
  auto get = [](const auto& slot, const std::vector<std::string_view>& names)
      -> std::optional<std::string> {
    if (!slot) return std::nullopt;
    return std::string(names[static_cast<std::size_t>(*slot)]);
  };
  if (name == "case") return get(b.case_, kCaseNames);
  if (name == "number") return get(b.number, kNumberNames);
  if (name == "person") return get(b.person, kPersonNames);
  if (name == "tense") return get(b.tense, kTenseNames);
  if (name == "mood") return get(b.mood, kMoodNames);
  if (name == "degree") return get(b.degree, kDegreeNames);
  return std::nullopt;
}

FeatureBundle parse_bundle(std::string_view text) {
  FeatureBundle b;
  while (!text.empty()) {
    auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{}
                                           : text.substr(comma + 1);
    if (item.empty()) continue;
    auto sep = item.find_first_of("=:");
    if (sep == std::string_view::npos ||
        !set_feature(b, item.substr(0, sep), item.substr(sep + 1))) {
      throw Error(ErrorCode::ParseError,
                  "bad feature '" + std::string(item) + "'");
    }
  }
  return b;
}

const std::vector<std::string_view>& feature_names() { return kFeatureNames; }

const std::vector<std::string_view>& feature_values(std::string_view name) {
  if (name == "case") return kCaseNames;
  if (name == "number") return kNumberNames;
  if (name == "person") return kPersonNames;
  if (name == "tense") return kTenseNames;
  if (name == "mood") return kMoodNames;
  if (name == "degree") return kDegreeNames;
  return kNoValues;
}

const std::vector<FeatureBundle>& licensed_bundles(PartOfSpeech pos) {
  static std::mutex mu;
  static std::map<PartOfSpeech, std::vector<FeatureBundle>> table;
  std::lock_guard lock(mu);
  auto it = table.find(pos);
  if (it == table.end()) it = table.emplace(pos, build_licensed(pos)).first;
  return it->second;
}

bool is_licensed(PartOfSpeech pos, const FeatureBundle& bundle) {
  const auto& all = licensed_bundles(pos);
  return std::binary_search(all.begin(), all.end(), bundle);
}

}  // namespace lexitransfer
