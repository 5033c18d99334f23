#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "negscope/corpus.hpp"
#include "negscope/encoding.hpp"
#include "negscope/tagger.hpp"

namespace negscope {

struct WordPrediction {
  int word_index = 0;
  // Distribution over the real (non-padding) classes, renormalized.
  std::vector<float> distribution;
  int label = 0;  // argmax; ties break toward the lowest class id
};

// Collapses token-level distributions back onto words: the token rows of a
// word are averaged, the padding class is dropped, and the rest renormalized.
std::vector<WordPrediction> aggregate_to_words(
    const std::vector<std::vector<float>>& token_distributions,
    const std::vector<std::pair<int, int>>& alignment);

// Word labels -> cues. Every affix/normal label becomes its own single-word
// cue; all multiword-labeled words in a sentence join into one cue, which is
// kept even when only a single word carries that label.
std::vector<Cue> extract_cues(const std::vector<int>& word_labels);

// Predicted sentences plus the examples that had to be skipped because their
// sub-token sequence exceeded the model's max_len. A skipped sentence keeps
// no predicted cues; a skipped scope example keeps an empty scope.
struct BatchPrediction {
  std::vector<Sentence> sentences;
  int n_overflow = 0;
  std::vector<SentenceSource> overflow_sources;
};

// Stage one: tag every sentence and attach predicted cues (empty scopes).
BatchPrediction predict_cues(TaggerModel& model, const std::vector<Sentence>& gold);

// Stage two against gold cues: each gold instance keeps its cue and gets a
// predicted scope under that instance's own cue-in-scope convention. Raw
// annotation carry-through is dropped from the output.
BatchPrediction predict_scopes_gold_cue(TaggerModel& model, const std::vector<Sentence>& gold,
                                        MarkStrategy strategy);

// Both stages: predicted cues feed the scope stage; predicted scopes follow
// `scope_includes_cue`.
BatchPrediction predict_end_to_end(TaggerModel& cue_model, TaggerModel& scope_model,
                                   const std::vector<Sentence>& gold, MarkStrategy strategy,
                                   bool scope_includes_cue);

// Single-sentence convenience wrapper over the two stages.
Sentence run_pipeline(const Sentence& s, TaggerModel& cue_model, TaggerModel& scope_model,
                      MarkStrategy strategy, bool scope_includes_cue);

}  // namespace negscope
