#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace negscope {

// Word positions are 0-based indices into Sentence::words.

enum class CueClass { kAffix = 0, kNormal = 1, kMultiword = 2 };

const char* to_string(CueClass c);

// Character range [begin, end) inside a word's surface form.
struct CharSpan {
  int begin = 0;
  int end = 0;
};

// One word of a cue. `span` is set only when the cue covers a proper
// sub-string of the word, e.g. "im" in "impolite".
struct CuePart {
  int word_index = 0;
  std::optional<CharSpan> span;
};

struct Cue {
  CueClass cue_class = CueClass::kNormal;
  std::vector<CuePart> parts;

  std::vector<int> word_indices() const;
  bool covers_word(int word_index) const;
  const CuePart* part_at(int word_index) const;
};

// Raw CD-SCO annotation strings of one instance keyed by word index:
// {cue form, scope form, negated-event form}, "" when the column was "_".
// Kept verbatim so a parsed file writes back field-identically, including
// negated-event columns the pipeline itself never models.
struct CdscoRaw {
  std::map<int, std::array<std::string, 3>> by_word;
};

struct NegationInstance {
  Cue cue;
  std::set<int> scope;
  // Whether this instance counts cue words as part of the scope.
  bool scope_includes_cue = false;
  std::optional<CdscoRaw> raw;
};

// CD-SCO carry-through columns; "_" placeholders for corpora without them.
struct WordMeta {
  std::string lemma = "_";
  std::string pos = "_";
  std::string syntax = "_";
};

struct SentenceSource {
  std::string corpus;
  std::string document;
  int sentence_number = 0;
};

std::string describe(const SentenceSource& s);

struct Sentence {
  std::vector<std::string> words;
  std::vector<WordMeta> word_meta;  // empty, or one entry per word
  std::vector<NegationInstance> instances;
  SentenceSource source;

  int size() const { return static_cast<int>(words.size()); }
};

enum class CorpusId {
  kSherlockTrain,
  kSherlockDev,
  kSherlockTest,
  kBioscopeAbstracts,
  kBioscopeFull,
  kSfu,
  kCustom,
};

const char* to_string(CorpusId id);
std::optional<CorpusId> corpus_id_from_string(const std::string& name);

// Only the Sherlock data annotates sub-word (affix) cues.
bool has_affix_annotation(CorpusId id);

struct Corpus {
  CorpusId id = CorpusId::kCustom;
  std::string label;  // display name; defaults to to_string(id)
  std::vector<Sentence> sentences;
};

// Structural checks on parsed data: in-bounds indices, cue class arity,
// strictly increasing cue parts, affix spans that are proper sub-ranges,
// and cue/scope overlap consistent with scope_includes_cue.
// Throws DataError naming the offending sentence.
void validate(const Sentence& s);

}  // namespace negscope
