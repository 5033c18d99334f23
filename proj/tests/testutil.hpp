#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "negscope/corpus.hpp"
#include "negscope/rng.hpp"
#include "negscope/tokenize.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) {
  return std::string(NEGSCOPE_TEST_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("negscope_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

inline negscope::Sentence make_sentence(std::vector<std::string> words,
                                        const std::string& doc = "tdoc", int number = 0) {
  negscope::Sentence s;
  s.words = std::move(words);
  s.source = {"test", doc, number};
  return s;
}

inline negscope::NegationInstance normal_cue(int word, std::set<int> scope,
                                             bool includes_cue = false) {
  negscope::NegationInstance inst;
  inst.cue.cue_class = negscope::CueClass::kNormal;
  inst.cue.parts = {negscope::CuePart{word, std::nullopt}};
  inst.scope = std::move(scope);
  inst.scope_includes_cue = includes_cue;
  return inst;
}

inline bool same_instance(const negscope::NegationInstance& a,
                          const negscope::NegationInstance& b) {
  if (a.cue.cue_class != b.cue.cue_class) return false;
  if (a.cue.parts.size() != b.cue.parts.size()) return false;
  for (size_t i = 0; i < a.cue.parts.size(); ++i) {
    if (a.cue.parts[i].word_index != b.cue.parts[i].word_index) return false;
    if (a.cue.parts[i].span.has_value() != b.cue.parts[i].span.has_value()) return false;
    if (a.cue.parts[i].span &&
        (a.cue.parts[i].span->begin != b.cue.parts[i].span->begin ||
         a.cue.parts[i].span->end != b.cue.parts[i].span->end))
      return false;
  }
  if (a.scope != b.scope) return false;
  if (a.scope_includes_cue != b.scope_includes_cue) return false;
  if (a.raw.has_value() != b.raw.has_value()) return false;
  if (a.raw && a.raw->by_word != b.raw->by_word) return false;
  return true;
}

inline bool same_sentence(const negscope::Sentence& a, const negscope::Sentence& b) {
  if (a.words != b.words) return false;
  if (a.source.corpus != b.source.corpus || a.source.document != b.source.document ||
      a.source.sentence_number != b.source.sentence_number)
    return false;
  if (a.word_meta.size() != b.word_meta.size()) return false;
  for (size_t i = 0; i < a.word_meta.size(); ++i) {
    if (a.word_meta[i].lemma != b.word_meta[i].lemma || a.word_meta[i].pos != b.word_meta[i].pos ||
        a.word_meta[i].syntax != b.word_meta[i].syntax)
      return false;
  }
  if (a.instances.size() != b.instances.size()) return false;
  for (size_t i = 0; i < a.instances.size(); ++i) {
    if (!same_instance(a.instances[i], b.instances[i])) return false;
  }
  return true;
}

// Splits a word into fixed-width character chunks, so multi-token words and
// their exact counts are easy to predict in alignment tests.
class ChunkTokenizer : public negscope::SubwordTokenizer {
 public:
  explicit ChunkTokenizer(int chunk = 3, int vocab = 1024) : chunk_(chunk), vocab_(vocab) {}

  std::vector<std::string> subwords(const std::string& word) const override {
    auto it = special_ids_.find(word);
    if (it != special_ids_.end()) return {word};
    std::vector<std::string> out;
    for (size_t i = 0; i < word.size(); i += static_cast<size_t>(chunk_))
      out.push_back(word.substr(i, static_cast<size_t>(chunk_)));
    if (out.empty()) out.push_back(word);
    return out;
  }

  int token_id(const std::string& token) const override {
    auto it = special_ids_.find(token);
    if (it != special_ids_.end()) return it->second;
    return 16 + static_cast<int>(negscope::fnv1a64(token) % static_cast<uint64_t>(vocab_ - 16));
  }

  int pad_id() const override { return 0; }
  int vocab_size() const override { return vocab_; }

  int register_special(const std::string& word) override {
    auto it = special_ids_.find(word);
    if (it != special_ids_.end()) return it->second;
    const int id = 1 + static_cast<int>(special_ids_.size());
    special_ids_[word] = id;
    order_.push_back(word);
    return id;
  }

  std::vector<std::string> specials() const override { return order_; }

 private:
  int chunk_;
  int vocab_;
  std::map<std::string, int> special_ids_;
  std::vector<std::string> order_;
};

// Random word sentences where every occurrence of "nope" is a normal cue;
// scope (when asked for) is the directly following word.
inline std::vector<negscope::Sentence> synthetic_cue_corpus(int n_sentences, uint64_t seed,
                                                            bool with_scope = false) {
  static const std::vector<std::string> filler = {"alpha", "bravo", "casta", "delta",
                                                  "fonda", "grape", "hotel", "india"};
  negscope::Rng rng(seed);
  std::vector<negscope::Sentence> out;
  for (int i = 0; i < n_sentences; ++i) {
    const int len = 4 + static_cast<int>(rng.below(5));
    negscope::Sentence s;
    s.source = {"synthetic", "gen", i};
    for (int w = 0; w < len; ++w)
      s.words.push_back(filler[static_cast<size_t>(rng.below(filler.size()))]);
    const int cue_at = static_cast<int>(rng.below(static_cast<uint64_t>(len - 1)));
    s.words[static_cast<size_t>(cue_at)] = "nope";
    negscope::NegationInstance inst;
    inst.cue.cue_class = negscope::CueClass::kNormal;
    inst.cue.parts = {negscope::CuePart{cue_at, std::nullopt}};
    if (with_scope) inst.scope.insert(cue_at + 1);
    s.instances.push_back(std::move(inst));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace testutil
