#pragma once

#include <nlohmann/json.hpp>

#include "lexitransfer/lexicon.hpp"
#include "lexitransfer/morphology.hpp"

namespace lexitransfer::json_io {

using nlohmann::json;

json lexeme(const Lexeme& lx);
Lexeme lexeme_from(const json& j);
NewLexeme new_lexeme_from(const json& j);

json link(const SenseLink& link);
SenseLink link_from(const json& j);

json phrase(const PhraseEntry& p);
PhraseEntry phrase_from(const json& j);

json change(const ChangeRecord& r);
ChangeRecord change_from(const json& j);

/// `[{"features":"case=genitive,number=sg","surface":"stalo"}, ...]` in
/// canonical bundle order.
json paradigm(const Paradigm& table);

json form(const MorphForm& f);
json sense(const ResolvedSense& s);
json diagnostic(const RuleDiagnostic& d);

/// Parses a JSON line and wraps nlohmann errors as Error(ParseError).
json parse(std::string_view text);

}  // namespace lexitransfer::json_io
