#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "negscope/corpus.hpp"
#include "negscope/errors.hpp"
#include "negscope/tokenize.hpp"

namespace negscope {

// Cue tagging labels per word.
enum CueLabel : int {
  kCueAffix = 0,
  kCueNormal = 1,
  kCueMulti = 2,
  kCueNone = 3,
  kCuePad = 4,
};

// Scope tagging labels per word of a marked sentence.
enum ScopeLabel : int {
  kScopeOut = 0,
  kScopeIn = 1,
  kScopePad = 2,
};

enum class Task { kCue, kScope };

const char* to_string(Task t);
int n_classes(Task t);  // includes the padding class
int pad_label(Task t);  // always the highest class id
std::vector<int> positive_classes(Task t);

using ClassWeights = std::vector<float>;

// Per-class loss weights: 1 everywhere except 0 on the padding class.
ClassWeights class_weights(Task t);

// How the scope stage marks cue words.
enum class MarkStrategy { kReplace, kAugment };

const char* to_string(MarkStrategy s);
std::optional<MarkStrategy> mark_strategy_from_string(const std::string& name);

// The special word standing in for (or preceding) a cue word of this class.
std::string marker_word(CueClass c);
void register_markers(SubwordTokenizer& tokenizer);

// Word-level cue labels of a sentence: the cue-class code for each word a
// cue covers, kCueNone elsewhere. Overlapping cues that disagree on the
// label raise DataError naming the sentence.
std::vector<int> cue_labels(const Sentence& s);

struct MarkedWords {
  std::vector<std::string> words;
  // original word index -> index in `words`; inserted markers have no entry
  std::vector<int> remap;
};

// Rewrites the sentence for one instance: kReplace substitutes each cue word
// with the class marker, kAugment inserts the marker before each cue word.
// The instance must have at least one cue part, all indices in bounds.
MarkedWords mark_cues(const Sentence& s, const NegationInstance& inst, MarkStrategy strategy);

struct ScopeExample {
  MarkedWords marked;
  std::vector<int> labels;  // one per marked word
};

// Marked words plus per-word scope labels: kScopeIn for words whose original
// index is in the instance scope, kScopeOut elsewhere (inserted markers
// included).
ScopeExample scope_labels(const Sentence& s, const NegationInstance& inst, MarkStrategy strategy);

struct TokenizedExample {
  std::vector<int> token_ids;        // length max_len
  std::vector<int> token_labels;     // length max_len, padding label on padding
  std::vector<uint8_t> attention_mask;  // 1 on real tokens
  std::vector<std::pair<int, int>> alignment;  // word -> [begin, end) token range
  int n_real_tokens = 0;
  int max_len = 0;
  SentenceSource source;
};

// Raised when a sentence needs more sub-tokens than max_len; there is no
// silent truncation.
struct OverflowError : DataError {
  OverflowError(const SentenceSource& src, int needed, int max_len);
  SentenceSource source;
  int needed = 0;
  int max_len = 0;
};

// Expands word labels onto sub-tokens (every sub-token inherits its word's
// label) and pads to max_len.
TokenizedExample align_to_subwords(const std::vector<std::string>& words,
                                   const std::vector<int>& word_labels,
                                   const SubwordTokenizer& tokenizer, int max_len, int pad_lbl,
                                   const SentenceSource& source = {});

// Line-oriented debug dump.
void dump_examples(const std::vector<TokenizedExample>& examples, std::ostream& out);

}  // namespace negscope
