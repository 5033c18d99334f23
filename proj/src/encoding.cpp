#include "negscope/encoding.hpp"

#include <algorithm>
#include <ostream>
#include <set>

namespace negscope {

const char* to_string(Task t) { return t == Task::kCue ? "cue" : "scope"; }

int n_classes(Task t) { return t == Task::kCue ? 5 : 3; }

int pad_label(Task t) { return t == Task::kCue ? int{kCuePad} : int{kScopePad}; }

std::vector<int> positive_classes(Task t) {
  if (t == Task::kCue) return {kCueAffix, kCueNormal, kCueMulti};
  return {kScopeIn};
}

ClassWeights class_weights(Task t) {
  ClassWeights w(static_cast<size_t>(n_classes(t)), 1.0f);
  w[static_cast<size_t>(pad_label(t))] = 0.0f;
  return w;
}

const char* to_string(MarkStrategy s) { return s == MarkStrategy::kReplace ? "replace" : "augment"; }

std::optional<MarkStrategy> mark_strategy_from_string(const std::string& name) {
  if (name == "replace") return MarkStrategy::kReplace;
  if (name == "augment") return MarkStrategy::kAugment;
  return std::nullopt;
}

std::string marker_word(CueClass c) {
  return "token[" + std::to_string(static_cast<int>(c)) + "]";
}

void register_markers(SubwordTokenizer& tokenizer) {
  for (CueClass c : {CueClass::kAffix, CueClass::kNormal, CueClass::kMultiword}) {
    tokenizer.register_special(marker_word(c));
  }
}

std::vector<int> cue_labels(const Sentence& s) {
  std::vector<int> labels(s.words.size(), kCueNone);
  for (size_t k = 0; k < s.instances.size(); ++k) {
    const NegationInstance& inst = s.instances[k];
    const int lbl = static_cast<int>(inst.cue.cue_class);
    for (const CuePart& p : inst.cue.parts) {
      if (p.word_index < 0 || p.word_index >= s.size())
        throw DataError(describe(s.source) + ": cue word index out of range");
      int& slot = labels[static_cast<size_t>(p.word_index)];
      if (slot != kCueNone && slot != lbl)
        throw DataError(describe(s.source) + ": word " + std::to_string(p.word_index) +
                        " carries conflicting cue labels " + std::to_string(slot) + " and " +
                        std::to_string(lbl));
      slot = lbl;
    }
  }
  return labels;
}

namespace {

std::set<int> checked_cue_indices(const Sentence& s, const NegationInstance& inst) {
  if (inst.cue.parts.empty())
    throw ArgumentError(describe(s.source) + ": instance has no cue parts");
  std::set<int> cue_words;
  for (const CuePart& p : inst.cue.parts) {
    if (p.word_index < 0 || p.word_index >= s.size())
      throw ArgumentError(describe(s.source) + ": cue word index " +
                          std::to_string(p.word_index) + " outside sentence of " +
                          std::to_string(s.size()) + " words");
    cue_words.insert(p.word_index);
  }
  return cue_words;
}

}  // namespace

MarkedWords mark_cues(const Sentence& s, const NegationInstance& inst, MarkStrategy strategy) {
  const std::set<int> cue_words = checked_cue_indices(s, inst);
  const std::string marker = marker_word(inst.cue.cue_class);

  MarkedWords out;
  out.remap.resize(s.words.size());
  if (strategy == MarkStrategy::kReplace) {
    out.words = s.words;
    for (int w : cue_words) out.words[static_cast<size_t>(w)] = marker;
    for (size_t i = 0; i < s.words.size(); ++i) out.remap[i] = static_cast<int>(i);
    return out;
  }
  for (size_t i = 0; i < s.words.size(); ++i) {
    if (cue_words.count(static_cast<int>(i))) out.words.push_back(marker);
    out.remap[i] = static_cast<int>(out.words.size());
    out.words.push_back(s.words[i]);
  }
  return out;
}

ScopeExample scope_labels(const Sentence& s, const NegationInstance& inst, MarkStrategy strategy) {
  ScopeExample out;
  out.marked = mark_cues(s, inst, strategy);
  out.labels.assign(out.marked.words.size(), kScopeOut);
  for (int w : inst.scope) {
    if (w < 0 || w >= s.size())
      throw ArgumentError(describe(s.source) + ": scope index " + std::to_string(w) +
                          " outside sentence");
    out.labels[static_cast<size_t>(out.marked.remap[static_cast<size_t>(w)])] = kScopeIn;
  }
  return out;
}

OverflowError::OverflowError(const SentenceSource& src, int needed_, int max_len_)
    : DataError(describe(src) + ": needs " + std::to_string(needed_) +
                " sub-tokens but max_len is " + std::to_string(max_len_)),
      source(src),
      needed(needed_),
      max_len(max_len_) {}

TokenizedExample align_to_subwords(const std::vector<std::string>& words,
                                   const std::vector<int>& word_labels,
                                   const SubwordTokenizer& tokenizer, int max_len, int pad_lbl,
                                   const SentenceSource& source) {
  if (words.size() != word_labels.size())
    throw ArgumentError(describe(source) + ": " + std::to_string(words.size()) + " words but " +
                        std::to_string(word_labels.size()) + " labels");
  if (max_len <= 0) throw ArgumentError("max_len must be positive");

  TokenizedExample ex;
  ex.max_len = max_len;
  ex.source = source;
  for (size_t i = 0; i < words.size(); ++i) {
    const std::vector<std::string> pieces = tokenizer.subwords(words[i]);
    const int begin = static_cast<int>(ex.token_ids.size());
    for (const std::string& piece : pieces) {
      ex.token_ids.push_back(tokenizer.token_id(piece));
      ex.token_labels.push_back(word_labels[i]);
    }
    ex.alignment.emplace_back(begin, static_cast<int>(ex.token_ids.size()));
  }
  ex.n_real_tokens = static_cast<int>(ex.token_ids.size());
  if (ex.n_real_tokens > max_len) throw OverflowError(source, ex.n_real_tokens, max_len);
  ex.token_ids.resize(static_cast<size_t>(max_len), tokenizer.pad_id());
  ex.token_labels.resize(static_cast<size_t>(max_len), pad_lbl);
  ex.attention_mask.assign(static_cast<size_t>(max_len), 0);
  std::fill(ex.attention_mask.begin(), ex.attention_mask.begin() + ex.n_real_tokens,
            static_cast<uint8_t>(1));
  return ex;
}

void dump_examples(const std::vector<TokenizedExample>& examples, std::ostream& out) {
  for (const TokenizedExample& ex : examples) {
    out << describe(ex.source) << " real=" << ex.n_real_tokens << "/" << ex.max_len << "\n";
    out << "  ids:";
    for (int i = 0; i < ex.n_real_tokens; ++i) out << ' ' << ex.token_ids[static_cast<size_t>(i)];
    out << "\n  labels:";
    for (int i = 0; i < ex.n_real_tokens; ++i)
      out << ' ' << ex.token_labels[static_cast<size_t>(i)];
    out << "\n  align:";
    for (size_t w = 0; w < ex.alignment.size(); ++w)
      out << ' ' << w << "->" << ex.alignment[w].first << ".." << ex.alignment[w].second;
    out << "\n";
  }
}

}  // namespace negscope
