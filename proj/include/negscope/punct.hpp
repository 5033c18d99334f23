#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "negscope/corpus.hpp"

namespace negscope {

// The 32 ASCII symbol characters used by default to spot punctuation words.
std::string default_punct_symbols();

struct PunctIndices {
  std::optional<int> first;  // nearest symbol-bearing word before the cue
  std::optional<int> last;   // nearest symbol-bearing word after the cue
};

// A word counts as symbol-bearing when any of its characters is in
// `symbols`. Indices outside [cue_min, cue_max] are searched.
PunctIndices punct_indices(const std::vector<std::string>& words, int cue_min, int cue_max,
                           const std::string& symbols);

// Whether the instance's scope runs up against the punctuation nearest the
// cue: the preceding symbol word sits at (or just before) the scope start,
// or the following one at (or just after) the scope end. Needs a non-empty
// cue and scope.
bool is_punct_delimited(const std::vector<std::string>& words, const NegationInstance& inst,
                        const std::string& symbols = default_punct_symbols());

struct PunctReport {
  long long n_instances = 0;   // gold instances partitioned below
  long long n_empty_scope = 0; // excluded from the partition
  long long n_delimited = 0;
  long long n_free = 0;
  long long delimited_exact = 0;
  long long free_exact = 0;
  double pcs_delimited = 0;
  double pcs_free = 0;
  double pcs_overall = 0;
  bool pcs_delimited_undefined = false;
  bool pcs_free_undefined = false;
  bool pcs_overall_undefined = false;
};

// Splits gold instances into punctuation-delimited and free ones and scores
// exact scope matches within each group. Instances align by position, as
// produced by the gold-cue scope stage.
PunctReport punct_pcs_report(const std::vector<Sentence>& gold,
                             const std::vector<Sentence>& pred,
                             const std::string& symbols = default_punct_symbols());

void write_punct_json(const PunctReport& report, std::ostream& out);
void write_punct_text(const PunctReport& report, std::ostream& out);

}  // namespace negscope
