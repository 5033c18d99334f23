#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "negscope/corpus.hpp"

namespace negscope {

// Biomedical-abstract style XML: <sentence> elements with nested <xcope>
// scopes and <cue type="..."> elements linked by ref/id. Scopes include
// their cue words. Speculation cues and their scopes are discarded.
std::vector<Sentence> parse_bioscope(std::istream& in, const std::string& corpus_name = "bioscope",
                                     std::vector<std::string>* warnings = nullptr);

// Review-corpus style XML: <SENTENCE> with per-token <W> elements, cues and
// scopes linked by ID, the cue outside its scope. Speculation is discarded.
std::vector<Sentence> parse_sfu(std::istream& in, const std::string& document_id = "sfu",
                                const std::string& corpus_name = "sfu",
                                std::vector<std::string>* warnings = nullptr);

}  // namespace negscope
