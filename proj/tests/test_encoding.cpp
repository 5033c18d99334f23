#include <fstream>
#include <sstream>

#include "doctest.h"
#include "negscope/corpus.hpp"
#include "negscope/encoding.hpp"
#include "negscope/errors.hpp"
#include "negscope/tokenize.hpp"
#include "testutil.hpp"

using namespace negscope;

namespace {

Sentence neither_nor() {
  Sentence s = testutil::make_sentence({"He", "will", "neither", "eat", "nor", "drink", "."});
  NegationInstance inst;
  inst.cue.cue_class = CueClass::kMultiword;
  inst.cue.parts = {{2, std::nullopt}, {4, std::nullopt}};
  inst.scope = {0, 1, 3, 5};
  s.instances.push_back(inst);
  return s;
}

WordPieceTokenizer paper_tokenizer() {
  std::ifstream in(testutil::data_path("wordpiece_vocab.txt"));
  REQUIRE(in.good());
  return WordPieceTokenizer(in);
}

}  // namespace

TEST_CASE("task constants: class counts, padding, weights") {
  CHECK(n_classes(Task::kCue) == 5);
  CHECK(n_classes(Task::kScope) == 3);
  CHECK(pad_label(Task::kCue) == kCuePad);
  CHECK(pad_label(Task::kScope) == kScopePad);
  CHECK(class_weights(Task::kCue) == ClassWeights{1, 1, 1, 1, 0});
  CHECK(class_weights(Task::kScope) == ClassWeights{1, 1, 0});
  CHECK(positive_classes(Task::kCue) == std::vector<int>{kCueAffix, kCueNormal, kCueMulti});
  CHECK(positive_classes(Task::kScope) == std::vector<int>{kScopeIn});
  CHECK(std::string(to_string(Task::kCue)) == "cue");
  CHECK(std::string(to_string(Task::kScope)) == "scope");
  CHECK(mark_strategy_from_string("replace") == MarkStrategy::kReplace);
  CHECK(mark_strategy_from_string("augment") == MarkStrategy::kAugment);
  CHECK_FALSE(mark_strategy_from_string("other").has_value());
}

TEST_CASE("cue labels per word") {
  const Sentence s = neither_nor();
  CHECK(cue_labels(s) == std::vector<int>{3, 3, 2, 3, 2, 3, 3});

  Sentence plain = testutil::make_sentence({"Nothing", "here"});
  CHECK(cue_labels(plain) == std::vector<int>{3, 3});

  Sentence affix = testutil::make_sentence({"I", "am", "impolite", "."});
  NegationInstance inst;
  inst.cue.cue_class = CueClass::kAffix;
  inst.cue.parts = {{2, CharSpan{0, 2}}};
  affix.instances.push_back(inst);
  CHECK(cue_labels(affix) == std::vector<int>{3, 3, 0, 3});
}

TEST_CASE("cue labels: overlapping instances must agree") {
  Sentence s = testutil::make_sentence({"not", "once"});
  s.instances.push_back(testutil::normal_cue(0, {1}));
  s.instances.push_back(testutil::normal_cue(0, {1}));
  CHECK(cue_labels(s) == std::vector<int>{1, 3});  // agreeing overlap is fine

  NegationInstance multi;
  multi.cue.cue_class = CueClass::kMultiword;
  multi.cue.parts = {{0, std::nullopt}};
  s.instances.push_back(multi);
  CHECK_THROWS_AS(cue_labels(s), DataError);

  Sentence bad = testutil::make_sentence({"one"});
  bad.instances.push_back(testutil::normal_cue(4, {}));
  CHECK_THROWS_AS(cue_labels(bad), DataError);
}

TEST_CASE("cue markers: one reserved word per cue class") {
  CHECK(marker_word(CueClass::kAffix) == "token[0]");
  CHECK(marker_word(CueClass::kNormal) == "token[1]");
  CHECK(marker_word(CueClass::kMultiword) == "token[2]");

  WordPieceTokenizer tok = paper_tokenizer();
  register_markers(tok);
  CHECK(tok.token_id("token[0]") == 2);
  CHECK(tok.token_id("token[1]") == 3);
  CHECK(tok.token_id("token[2]") == 4);
  CHECK(tok.subwords("token[2]") == std::vector<std::string>{"token[2]"});
}

TEST_CASE("replace marking substitutes cue words in place") {
  Sentence s = testutil::make_sentence({"I", "did", "not", "see", "him"});
  s.instances.push_back(testutil::normal_cue(2, {0, 1, 3, 4}));

  const MarkedWords m = mark_cues(s, s.instances[0], MarkStrategy::kReplace);
  CHECK(m.words == std::vector<std::string>{"I", "did", "token[1]", "see", "him"});
  CHECK(m.remap == std::vector<int>{0, 1, 2, 3, 4});

  const Sentence multi = neither_nor();
  const MarkedWords mm = mark_cues(multi, multi.instances[0], MarkStrategy::kReplace);
  CHECK(mm.words == std::vector<std::string>{"He", "will", "token[2]", "eat", "token[2]",
                                             "drink", "."});
  CHECK(mm.remap == std::vector<int>{0, 1, 2, 3, 4, 5, 6});
}

TEST_CASE("augment marking inserts the marker before each cue word") {
  Sentence s = testutil::make_sentence({"I", "did", "not", "see", "him"});
  s.instances.push_back(testutil::normal_cue(2, {0, 1, 3, 4}));

  const MarkedWords m = mark_cues(s, s.instances[0], MarkStrategy::kAugment);
  CHECK(m.words == std::vector<std::string>{"I", "did", "token[1]", "not", "see", "him"});
  CHECK(m.remap == std::vector<int>{0, 1, 3, 4, 5});

  const Sentence multi = neither_nor();
  const MarkedWords mm = mark_cues(multi, multi.instances[0], MarkStrategy::kAugment);
  CHECK(mm.words == std::vector<std::string>{"He", "will", "token[2]", "neither", "eat",
                                             "token[2]", "nor", "drink", "."});
  CHECK(mm.remap == std::vector<int>{0, 1, 3, 4, 6, 7, 8});
}

TEST_CASE("marking rejects empty and out-of-range cues") {
  Sentence s = testutil::make_sentence({"a", "b"});
  NegationInstance empty;
  CHECK_THROWS_AS(mark_cues(s, empty, MarkStrategy::kReplace), ArgumentError);

  NegationInstance oob;
  oob.cue.parts = {{7, std::nullopt}};
  CHECK_THROWS_AS(mark_cues(s, oob, MarkStrategy::kAugment), ArgumentError);
}

TEST_CASE("scope labels follow the remapped positions") {
  Sentence s = testutil::make_sentence({"I", "did", "not", "see", "him", "."});
  s.instances.push_back(testutil::normal_cue(2, {0, 1, 3, 4}));

  const ScopeExample rep = scope_labels(s, s.instances[0], MarkStrategy::kReplace);
  CHECK(rep.labels == std::vector<int>{1, 1, 0, 1, 1, 0});

  const ScopeExample aug = scope_labels(s, s.instances[0], MarkStrategy::kAugment);
  CHECK(aug.marked.words.size() == 7);
  CHECK(aug.labels == std::vector<int>{1, 1, 0, 0, 1, 1, 0});  // marker and cue stay out

  Sentence inc = s;
  inc.instances[0].scope.insert(2);
  inc.instances[0].scope_includes_cue = true;
  const ScopeExample aug2 = scope_labels(inc, inc.instances[0], MarkStrategy::kAugment);
  CHECK(aug2.labels == std::vector<int>{1, 1, 0, 1, 1, 1, 0});  // cue word in, marker out

  Sentence bad = s;
  bad.instances[0].scope.insert(40);
  CHECK_THROWS_AS(scope_labels(bad, bad.instances[0], MarkStrategy::kReplace), ArgumentError);
}

TEST_CASE("sub-token alignment: labels expand, padding fills the tail") {
  const WordPieceTokenizer tok = paper_tokenizer();
  const std::vector<std::string> words{"This", "is", "not", "a", "negation"};
  const std::vector<int> labels{3, 3, 1, 3, 3};

  const TokenizedExample ex = align_to_subwords(words, labels, tok, 16, kCuePad);
  CHECK(ex.n_real_tokens == 7);
  CHECK(ex.max_len == 16);
  CHECK(ex.token_ids ==
        std::vector<int>{5, 6, 7, 8, 9, 10, 11, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  CHECK(ex.token_labels ==
        std::vector<int>{3, 3, 3, 1, 3, 3, 3, 4, 4, 4, 4, 4, 4, 4, 4, 4});
  CHECK(ex.alignment == std::vector<std::pair<int, int>>{{0, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 7}});
  CHECK(ex.attention_mask ==
        std::vector<uint8_t>{1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0});
}

TEST_CASE("sub-token alignment: overflow is an error, never truncation") {
  const WordPieceTokenizer tok = paper_tokenizer();
  const std::vector<std::string> words{"This", "is", "not", "a", "negation"};
  const std::vector<int> labels{3, 3, 1, 3, 3};
  SentenceSource src{"testcorp", "doc9", 4};

  try {
    align_to_subwords(words, labels, tok, 6, kCuePad, src);
    FAIL("expected overflow");
  } catch (const OverflowError& e) {
    CHECK(e.needed == 7);
    CHECK(e.max_len == 6);
    CHECK(e.source.document == "doc9");
    CHECK(e.source.sentence_number == 4);
    CHECK(std::string(e.what()).find("7") != std::string::npos);
  }

  CHECK_THROWS_AS(align_to_subwords(words, {3, 3}, tok, 16, kCuePad), ArgumentError);
  CHECK_THROWS_AS(align_to_subwords(words, labels, tok, 0, kCuePad), ArgumentError);
}

TEST_CASE("example dump lists ids, labels, and alignment") {
  const WordPieceTokenizer tok = paper_tokenizer();
  const TokenizedExample ex =
      align_to_subwords({"not", "a"}, {1, 3}, tok, 4, kCuePad, {"c", "d", 1});
  std::ostringstream out;
  dump_examples({ex}, out);
  const std::string text = out.str();
  CHECK(text.find("real=2/4") != std::string::npos);
  CHECK(text.find("ids: 8 9") != std::string::npos);
  CHECK(text.find("labels: 1 3") != std::string::npos);
  CHECK(text.find("0->0..1") != std::string::npos);
}
