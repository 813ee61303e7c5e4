#include "lexitransfer/transfer.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lexitransfer/error.hpp"

namespace lexitransfer {

namespace {

using nlohmann::json;

std::string read_text(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileUnreadable, "cannot read " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <typename Fn>
void for_each_record(std::string_view text, Fn&& fn) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    try {
      fn(json::parse(line));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError,
                  "rule line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

std::vector<Predicate> parse_pattern(const json& j) {
  std::vector<Predicate> out;
  for (const auto& e : j) out.push_back(parse_predicate(e.get<std::string>()));
  if (out.empty()) throw Error(ErrorCode::ParseError, "empty rule pattern");
  return out;
}

bool match_from(const std::vector<Predicate>& pattern,
                const std::vector<VariantSlot>& slots, std::size_t elem,
                std::size_t pos, std::vector<std::optional<std::size_t>>& out,
                std::size_t& end) {
  if (elem == pattern.size()) {
    end = pos;
    return true;
  }
  const auto& p = pattern[elem];
  if (pos < slots.size() && predicate_matches(p, slots[pos])) {
    out[elem] = pos;
    if (match_from(pattern, slots, elem + 1, pos + 1, out, end)) return true;
  }
  if (p.optional) {
    out[elem] = std::nullopt;
    if (match_from(pattern, slots, elem + 1, pos, out, end)) return true;
  }
  return false;
}

// True when the source token at `position` began a sentence.
bool source_sentence_initial(const std::vector<VariantSlot>& slots,
                             std::size_t position) {
  if (position == 0) return true;
  for (const auto& s : slots) {
    if (s.token.position + 1 != position) continue;
    return s.token.kind == TokenKind::Punctuation &&
           is_sentence_final(s.token.surface);
  }
  return false;
}

int default_score(const FeatureBundle& b) {
  int score = 0;
  if (b.case_ == Case::Nominative) ++score;
  if (b.number == Number::Sg) ++score;
  if (b.person == Person::Third) ++score;
  if (b.tense == Tense::Present) ++score;
  if (b.degree == Degree::Positive) ++score;
  return score;
}

template <typename T>
bool agrees(const std::optional<T>& want, const std::optional<T>& have) {
  return !want || want == have;
}

}  // namespace

// --- slots and alternatives ----------------------------------------------

std::vector<Slot> build_slots(const std::vector<Token>& tokens, Language lang,
                              const Lexicon& lexicon) {
  std::vector<Slot> slots;
  slots.reserve(tokens.size());
  for (const auto& tok : tokens) {
    Slot slot;
    slot.token = tok;
    if (tok.kind == TokenKind::Word) {
      slot.analyses = analyze(tok.surface, lang, lexicon);
      slot.oov = slot.analyses.empty();
      if (!slot.oov) slot.head = lexicon.find(slot.analyses.front().lexeme_id);
    }
    slots.push_back(std::move(slot));
  }
  return slots;
}

std::vector<std::vector<SenseChoice>> slot_alternatives(
    const std::vector<Slot>& slots, const Lexicon& lexicon,
    const std::optional<std::string>& active_domain) {
  std::vector<std::vector<SenseChoice>> out(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const auto& analyses = slots[i].analyses;
    for (std::size_t a = 0; a < analyses.size(); ++a) {
      if (a > 0 && analyses[a].lexeme_id == analyses[a - 1].lexeme_id) continue;
      auto source = lexicon.find(analyses[a].lexeme_id);
      if (!source) continue;
      for (auto& sense : lexicon.resolve_senses(source->id, active_domain)) {
        SenseChoice c;
        c.source = *source;
        c.source_features = analyses[a].features;
        c.target = std::move(sense.target);
        c.priority = sense.priority;
        c.rank = static_cast<int>(out[i].size()) + 1;
        out[i].push_back(std::move(c));
      }
    }
  }
  return out;
}

// --- variants --------------------------------------------------------------

int TranslationVariant::priority_sum() const noexcept {
  return std::accumulate(sense_priorities.begin(), sense_priorities.end(), 0);
}

bool priority_less(const TranslationVariant& a, const TranslationVariant& b) {
  const int sa = a.priority_sum(), sb = b.priority_sum();
  if (sa != sb) return sa < sb;
  return a.sense_priorities < b.sense_priorities;
}

std::vector<TranslationVariant> expand_variants(
    const std::vector<Slot>& slots,
    const std::vector<std::vector<SenseChoice>>& alternatives,
    std::size_t max_variants) {
  if (max_variants == 0)
    throw Error(ErrorCode::BadRequest, "max_variants must be at least 1");
  if (alternatives.size() != slots.size())
    throw Error(ErrorCode::BadRequest, "alternatives do not align with slots");

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < slots.size(); ++i)
    if (!alternatives[i].empty()) active.push_back(i);

  using State = std::vector<std::size_t>;
  auto less = [](const State& a, const State& b) {
    const auto sa = std::accumulate(a.begin(), a.end(), std::size_t{0});
    const auto sb = std::accumulate(b.begin(), b.end(), std::size_t{0});
    if (sa != sb) return sa < sb;
    return a < b;
  };
  std::set<State, decltype(less)> frontier(less);
  std::set<State> seen;
  State start(active.size(), 0);
  frontier.insert(start);
  seen.insert(start);

  std::vector<TranslationVariant> out;
  while (!frontier.empty() && out.size() < max_variants) {
    State state = *frontier.begin();
    frontier.erase(frontier.begin());

    TranslationVariant v;
    std::size_t k = 0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      VariantSlot vs;
      vs.token = slots[i].token;
      vs.source_index = i;
      if (k < active.size() && active[k] == i) {
        const auto& choice = alternatives[i][state[k]];
        vs.source = choice.source;
        vs.source_features = choice.source_features;
        vs.target = choice.target;
        vs.rank = choice.rank;
        v.sense_priorities.push_back(choice.rank);
        ++k;
      } else {
        vs.source = slots[i].head;
        if (!slots[i].analyses.empty())
          vs.source_features = slots[i].analyses.front().features;
      }
      v.slots.push_back(std::move(vs));
    }
    out.push_back(std::move(v));

    for (std::size_t d = 0; d < state.size(); ++d) {
      if (state[d] + 1 >= alternatives[active[d]].size()) continue;
      State next = state;
      ++next[d];
      if (seen.insert(next).second) frontier.insert(std::move(next));
    }
  }
  return out;
}

// --- predicates --------------------------------------------------------------

Predicate parse_predicate(std::string_view text) {
  Predicate p;
  if (!text.empty() && text.back() == '?') {
    p.optional = true;
    text.remove_suffix(1);
  }
  if (text == "*") return p;
  if (text == "punct") {
    p.kind = Predicate::Kind::Punct;
    return p;
  }
  if (text == "oov") {
    p.kind = Predicate::Kind::Oov;
    return p;
  }
  auto colon = text.find(':');
  if (colon == std::string_view::npos || colon + 1 == text.size())
    throw Error(ErrorCode::ParseError, "bad predicate '" + std::string(text) + "'");
  auto head = text.substr(0, colon);
  p.value = std::string(text.substr(colon + 1));
  if (head == "pos") p.kind = Predicate::Kind::Pos;
  else if (head == "lemma") p.kind = Predicate::Kind::Lemma;
  else if (head == "srcpos") p.kind = Predicate::Kind::SourcePos;
  else if (head == "src") p.kind = Predicate::Kind::SourceLemma;
  else throw Error(ErrorCode::ParseError, "bad predicate '" + std::string(text) + "'");
  if ((p.kind == Predicate::Kind::Pos || p.kind == Predicate::Kind::SourcePos) &&
      !parse_pos_name(p.value))
    throw Error(ErrorCode::ParseError, "unknown part of speech '" + p.value + "'");
  return p;
}

bool predicate_matches(const Predicate& p, const VariantSlot& slot) {
  const bool word = slot.token.kind == TokenKind::Word;
  switch (p.kind) {
    case Predicate::Kind::Any: return true;
    case Predicate::Kind::Punct: return !word;
    case Predicate::Kind::Oov: return word && !slot.source;
    case Predicate::Kind::Pos: {
      const auto& lx = slot.target ? slot.target : slot.source;
      return lx && pos_name(lx->pos.name) == p.value;
    }
    case Predicate::Kind::Lemma:
      return slot.target && slot.target->lemma == p.value;
    case Predicate::Kind::SourcePos:
      return slot.source && pos_name(slot.source->pos.name) == p.value;
    case Predicate::Kind::SourceLemma:
      if (slot.source) return slot.source->lemma == p.value;
      return word && slot.token.surface == p.value;
  }
  return false;
}

std::optional<std::vector<std::optional<std::size_t>>> match_pattern(
    const std::vector<Predicate>& pattern, const std::vector<VariantSlot>& slots,
    std::size_t from, std::size_t* match_start, std::size_t* match_end) {
  std::vector<std::optional<std::size_t>> assignment(pattern.size());
  for (std::size_t start = from; start < slots.size(); ++start) {
    std::size_t end = start;
    if (match_from(pattern, slots, 0, start, assignment, end) && end > start) {
      // An absent leading optional must not let the match begin later.
      if (!assignment.empty()) {
        std::size_t first = end;
        for (const auto& a : assignment)
          if (a) first = std::min(first, *a);
        if (first != start) continue;
      }
      if (match_start) *match_start = start;
      if (match_end) *match_end = end;
      return assignment;
    }
  }
  return std::nullopt;
}

// --- syntax rules ------------------------------------------------------------

std::vector<SyntaxRule> parse_syntax_rules(std::string_view text) {
  std::vector<SyntaxRule> rules;
  for_each_record(text, [&](const json& j) {
    SyntaxRule r;
    r.id = j.value("id", "");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "forbid") r.kind = SyntaxRule::Kind::Forbid;
    else if (kind == "reorder") r.kind = SyntaxRule::Kind::Reorder;
    else throw Error(ErrorCode::ParseError, "unknown syntax rule kind " + kind);
    r.pattern = parse_pattern(j.at("pattern"));
    if (r.kind == SyntaxRule::Kind::Reorder) {
      r.permutation = j.at("permutation").get<std::vector<std::size_t>>();
      std::vector<std::size_t> sorted = r.permutation;
      std::sort(sorted.begin(), sorted.end());
      std::vector<std::size_t> identity(r.pattern.size());
      std::iota(identity.begin(), identity.end(), 0);
      if (sorted != identity)
        throw Error(ErrorCode::ParseError,
                    "rule " + r.id + ": permutation does not match pattern length");
      for (const auto& p : r.pattern)
        if (p.optional)
          throw Error(ErrorCode::ParseError,
                      "rule " + r.id + ": reorder patterns cannot be optional");
    }
    rules.push_back(std::move(r));
  });
  return rules;
}

std::vector<SyntaxRule> load_syntax_rules(const std::filesystem::path& file) {
  return parse_syntax_rules(read_text(file));
}

std::optional<TranslationVariant> apply_syntax_rules(
    TranslationVariant variant, const std::vector<SyntaxRule>& rules) {
  for (const auto& rule : rules) {
    if (rule.kind == SyntaxRule::Kind::Forbid &&
        match_pattern(rule.pattern, variant.slots, 0))
      return std::nullopt;
  }
  for (const auto& rule : rules) {
    if (rule.kind != SyntaxRule::Kind::Reorder) continue;
    std::size_t start = 0;
    if (!match_pattern(rule.pattern, variant.slots, 0, &start)) continue;
    std::vector<VariantSlot> window(variant.slots.begin() + start,
                                    variant.slots.begin() + start +
                                        rule.pattern.size());
    for (std::size_t i = 0; i < rule.permutation.size(); ++i)
      variant.slots[start + i] = window[rule.permutation[i]];
  }
  return variant;
}

// --- agreement ---------------------------------------------------------------

std::vector<AgreementRule> parse_agreement_rules(std::string_view text) {
  std::vector<AgreementRule> rules;
  for_each_record(text, [&](const json& j) {
    AgreementRule r;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "drop") {
      r.kind = AgreementRule::Kind::Drop;
      r.when = parse_predicate(j.at("when").get<std::string>());
    } else if (kind == "assign") {
      r.kind = AgreementRule::Kind::Assign;
      r.pattern = parse_pattern(j.at("pattern"));
      r.target = j.at("target").get<std::size_t>();
      if (r.target >= r.pattern.size())
        throw Error(ErrorCode::ParseError, "assign target outside pattern");
      if (j.contains("set"))
        for (const auto& [name, value] : j["set"].items())
          if (!set_feature(r.set, name, value.get<std::string>()))
            throw Error(ErrorCode::ParseError, "bad feature " + name);
      if (j.contains("copy"))
        for (const auto& [name, index] : j["copy"].items()) {
          const auto idx = index.get<std::size_t>();
          if (idx >= r.pattern.size() || feature_values(name).empty())
            throw Error(ErrorCode::ParseError, "bad copy of " + name);
          r.copy[name] = idx;
        }
    } else {
      throw Error(ErrorCode::ParseError, "unknown agreement rule kind " + kind);
    }
    rules.push_back(std::move(r));
  });
  return rules;
}

std::vector<AgreementRule> load_agreement_rules(const std::filesystem::path& file) {
  return parse_agreement_rules(read_text(file));
}

FeatureBundle fit_bundle(const FeatureBundle& requested, PartOfSpeech pos) {
  const auto& licensed = licensed_bundles(pos);
  if (licensed.size() == 1 && licensed.front().empty()) return {};

  FeatureBundle used;  // which features this POS uses at all
  for (const auto& b : licensed) {
    if (b.case_) used.case_ = b.case_;
    if (b.number) used.number = b.number;
    if (b.person) used.person = b.person;
    if (b.tense) used.tense = b.tense;
    if (b.mood) used.mood = b.mood;
    if (b.degree) used.degree = b.degree;
  }
  FeatureBundle want;
  if (used.case_) want.case_ = requested.case_;
  if (used.number) want.number = requested.number;
  if (used.person) want.person = requested.person;
  if (used.tense) want.tense = requested.tense;
  if (used.degree) want.degree = requested.degree;
  if (used.mood && requested.mood == Mood::Infinitive) want.mood = Mood::Infinitive;
  if (want.mood && (want.tense || want.person || want.number)) want.mood.reset();

  const FeatureBundle* best = nullptr;
  int best_score = -1;
  for (const auto& b : licensed) {
    if (!agrees(want.case_, b.case_) || !agrees(want.number, b.number) ||
        !agrees(want.person, b.person) || !agrees(want.tense, b.tense) ||
        !agrees(want.mood, b.mood) || !agrees(want.degree, b.degree))
      continue;
    const int score = default_score(b);
    if (score > best_score) {
      best = &b;
      best_score = score;
    }
  }
  return best ? *best : want;
}

TranslationVariant tune_endings(TranslationVariant variant, Direction dir,
                                const std::vector<AgreementRule>& rules,
                                const Lexicon& lexicon) {
  auto& slots = variant.slots;
  for (auto& s : slots)
    if (s.translated()) s.features = fit_bundle(s.source_features, s.target->pos);

  for (const auto& rule : rules) {
    if (rule.kind != AgreementRule::Kind::Assign) continue;
    std::size_t from = 0, start = 0;
    while (auto m = match_pattern(rule.pattern, slots, from, &start)) {
      from = start + 1;
      const auto& target_idx = (*m)[rule.target];
      if (!target_idx || !slots[*target_idx].translated()) continue;
      auto& features = slots[*target_idx].features;
      for (const auto& name : feature_names())
        if (auto v = get_feature(rule.set, name)) set_feature(features, name, *v);
      for (const auto& [name, elem] : rule.copy) {
        const auto& src_idx = (*m)[elem];
        if (!src_idx || !slots[*src_idx].translated()) continue;
        if (auto v = get_feature(slots[*src_idx].features, name))
          set_feature(features, name, *v);
      }
    }
  }

  for (auto& s : slots) {
    if (s.translated()) {
      s.features = fit_bundle(s.features, s.target->pos);
      s.surface = lexicon.lookup_form(s.target->id, s.features).surface;
    } else {
      s.surface = s.token.original;
    }
  }
  for (const auto& rule : rules) {
    if (rule.kind != AgreementRule::Kind::Drop) continue;
    for (auto& s : slots)
      if (predicate_matches(rule.when, s)) s.dropped = true;
  }
  variant.rendered = render(slots, dir.to);
  return variant;
}

std::string render(const std::vector<VariantSlot>& slots, Language target) {
  std::vector<std::string> pieces;
  bool at_sentence_start = true;
  for (const auto& s : slots) {
    if (s.dropped) continue;
    if (s.token.kind == TokenKind::Punctuation) {
      pieces.push_back(s.surface);
      if (is_sentence_final(s.token.surface)) at_sentence_start = true;
      continue;
    }
    std::string piece = s.surface;
    if (s.translated()) {
      Capitalization cap = s.token.capitalization;
      // Source sentence-initial capitals are positional, not lexical.
      if (cap == Capitalization::Initial &&
          source_sentence_initial(slots, s.token.position))
        cap = Capitalization::Lower;
      piece = apply_capitalization(piece, cap, target);
    }
    if (at_sentence_start) piece = capitalize_first(piece, target);
    at_sentence_start = false;
    pieces.push_back(std::move(piece));
  }
  return detokenize(pieces);
}

}  // namespace lexitransfer
