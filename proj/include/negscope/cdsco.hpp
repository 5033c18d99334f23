#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "negscope/corpus.hpp"

namespace negscope {

// Tab-separated column format with blank-line sentence blocks. Each line:
// document id, sentence number, token number, word, lemma, POS, syntax,
// then either a single "***" (no negation) or one cue/scope/event column
// triple per negation instance, "_" marking absent fields.
//
// Throws ParseError with a line number for ragged rows, bad column counts,
// or a cue form that is not a sub-string of its word. Recoverable oddities
// are appended to `warnings` when given.
std::vector<Sentence> parse_cdsco(std::istream& in, const std::string& corpus_name = "cdsco",
                                  std::vector<std::string>* warnings = nullptr);

// Inverse of parse_cdsco. Annotation columns come verbatim from the parsed
// raw strings when present, and are otherwise derived from the structured
// cues and scopes (as for predicted sentences).
void write_cdsco(const std::vector<Sentence>& sentences, std::ostream& out);

}  // namespace negscope
