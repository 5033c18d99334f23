#include "negscope/corpus.hpp"

#include <algorithm>

#include "negscope/errors.hpp"

namespace negscope {

const char* to_string(CueClass c) {
  switch (c) {
    case CueClass::kAffix: return "affix";
    case CueClass::kNormal: return "normal";
    case CueClass::kMultiword: return "multiword";
  }
  return "?";
}

std::vector<int> Cue::word_indices() const {
  std::vector<int> out;
  out.reserve(parts.size());
  for (const auto& p : parts) out.push_back(p.word_index);
  return out;
}

bool Cue::covers_word(int word_index) const { return part_at(word_index) != nullptr; }

const CuePart* Cue::part_at(int word_index) const {
  for (const auto& p : parts) {
    if (p.word_index == word_index) return &p;
  }
  return nullptr;
}

std::string describe(const SentenceSource& s) {
  return s.corpus + ":" + s.document + ":" + std::to_string(s.sentence_number);
}

const char* to_string(CorpusId id) {
  switch (id) {
    case CorpusId::kSherlockTrain: return "sherlock_train";
    case CorpusId::kSherlockDev: return "sherlock_dev";
    case CorpusId::kSherlockTest: return "sherlock_test";
    case CorpusId::kBioscopeAbstracts: return "bioscope_abstracts";
    case CorpusId::kBioscopeFull: return "bioscope_full";
    case CorpusId::kSfu: return "sfu";
    case CorpusId::kCustom: return "custom";
  }
  return "?";
}

std::optional<CorpusId> corpus_id_from_string(const std::string& name) {
  for (CorpusId id : {CorpusId::kSherlockTrain, CorpusId::kSherlockDev, CorpusId::kSherlockTest,
                      CorpusId::kBioscopeAbstracts, CorpusId::kBioscopeFull, CorpusId::kSfu,
                      CorpusId::kCustom}) {
    if (name == to_string(id)) return id;
  }
  return std::nullopt;
}

bool has_affix_annotation(CorpusId id) {
  return id == CorpusId::kSherlockTrain || id == CorpusId::kSherlockDev ||
         id == CorpusId::kSherlockTest;
}

void validate(const Sentence& s) {
  const std::string where = describe(s.source);
  if (s.words.empty()) throw DataError(where + ": sentence has no words");
  if (!s.word_meta.empty() && s.word_meta.size() != s.words.size())
    throw DataError(where + ": word_meta size mismatch");
  const int n = s.size();
  for (size_t k = 0; k < s.instances.size(); ++k) {
    const NegationInstance& inst = s.instances[k];
    const std::string tag = where + " instance " + std::to_string(k);
    if (inst.cue.parts.empty()) throw DataError(tag + ": cue has no parts");
    int prev = -1;
    for (const CuePart& p : inst.cue.parts) {
      if (p.word_index < 0 || p.word_index >= n)
        throw DataError(tag + ": cue word index out of range");
      if (p.word_index <= prev) throw DataError(tag + ": cue parts not strictly increasing");
      prev = p.word_index;
      if (p.span) {
        const std::string& w = s.words[p.word_index];
        const int len = static_cast<int>(w.size());
        if (p.span->begin < 0 || p.span->end > len || p.span->begin >= p.span->end)
          throw DataError(tag + ": cue span out of range");
        if (p.span->end - p.span->begin >= len)
          throw DataError(tag + ": affix span must be a proper sub-range of the word");
      }
    }
    switch (inst.cue.cue_class) {
      case CueClass::kAffix:
        if (inst.cue.parts.size() != 1 || !inst.cue.parts[0].span)
          throw DataError(tag + ": affix cue needs exactly one part with a char span");
        break;
      case CueClass::kNormal:
        if (inst.cue.parts.size() != 1 || inst.cue.parts[0].span)
          throw DataError(tag + ": normal cue needs exactly one whole-word part");
        break;
      case CueClass::kMultiword:
        if (inst.cue.parts.size() < 2)
          throw DataError(tag + ": multiword cue needs at least two parts");
        break;
    }
    for (int w : inst.scope) {
      if (w < 0 || w >= n) throw DataError(tag + ": scope index out of range");
    }
    if (!inst.scope_includes_cue && inst.cue.cue_class != CueClass::kAffix) {
      for (const CuePart& p : inst.cue.parts) {
        if (inst.scope.count(p.word_index))
          throw DataError(tag + ": cue word inside scope but scope_includes_cue is false");
      }
    }
  }
}

}  // namespace negscope
