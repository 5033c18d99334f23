#pragma once

#include <iosfwd>

#include "negscope/corpus.hpp"

namespace negscope {

// One JSON object per sentence; the common interchange format between the
// ingest, train, evaluate, and analysis commands.
void write_jsonl(const Corpus& corpus, std::ostream& out);
void write_jsonl_sentences(const std::vector<Sentence>& sentences, const std::string& corpus_name,
                           const std::string& label, std::ostream& out);

// Reads a corpus back; validates every sentence. Throws ParseError on
// malformed lines and DataError on invariant violations.
Corpus read_jsonl(std::istream& in);

}  // namespace negscope
