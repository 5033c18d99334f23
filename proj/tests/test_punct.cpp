#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "negscope/cdsco.hpp"
#include "negscope/errors.hpp"
#include "negscope/punct.hpp"
#include "testutil.hpp"

using namespace negscope;

namespace {

const std::vector<std::string> kFreeWords{"I",       "do",  "not",  "think", ",", "however",
                                          ",",       "that", "he",  "lied",  "."};

std::vector<Sentence> sherlock_fixture() {
  std::ifstream in(testutil::data_path("sherlock_sample.cdsco"));
  REQUIRE(in.good());
  return parse_cdsco(in, "sherlock");
}

}  // namespace

TEST_CASE("default symbol set: the 32 ascii symbol characters") {
  const std::string symbols = default_punct_symbols();
  CHECK(symbols.size() == 32);
  for (const char c : {'.', ',', ';', ':', '!', '?', '(', ')', '"', '\'', '-', '\\'})
    CHECK(symbols.find(c) != std::string::npos);
  for (const char c : {'a', 'Z', '0', '9', ' '})
    CHECK(symbols.find(c) == std::string::npos);
}

TEST_CASE("nearest symbol words around a cue") {
  const PunctIndices p = punct_indices(kFreeWords, 2, 2, default_punct_symbols());
  CHECK_FALSE(p.first.has_value());
  REQUIRE(p.last.has_value());
  CHECK(*p.last == 4);

  // Scanning outward stops at the closest hit on each side.
  const PunctIndices q = punct_indices(kFreeWords, 5, 5, default_punct_symbols());
  REQUIRE(q.first.has_value());
  CHECK(*q.first == 4);
  REQUIRE(q.last.has_value());
  CHECK(*q.last == 6);

  // A narrower symbol set can see different neighbors.
  const PunctIndices dot_only = punct_indices(kFreeWords, 2, 2, ".");
  CHECK_FALSE(dot_only.first.has_value());
  REQUIRE(dot_only.last.has_value());
  CHECK(*dot_only.last == 10);
}

TEST_CASE("scope-delimiting punctuation on either side") {
  // Preceding symbol word just before the scope start.
  Sentence said = testutil::make_sentence(
      {"He", "said", ",", "this", "is", "not", "a", "negation", "."});
  said.instances.push_back(testutil::normal_cue(5, {3, 4, 6, 7}));
  CHECK(is_punct_delimited(said.words, said.instances[0]));

  // Preceding symbol word at the scope start itself.
  Sentence at_start = testutil::make_sentence({"x", ",", "b", "not", "d"});
  at_start.instances.push_back(testutil::normal_cue(3, {1, 2}));
  CHECK(is_punct_delimited(at_start.words, at_start.instances[0]));

  // Following symbol word just after the scope end.
  Sentence trailing = testutil::make_sentence({"This", "is", "not", "a", "negation", "."});
  trailing.instances.push_back(testutil::normal_cue(2, {0, 1, 3, 4}));
  CHECK(is_punct_delimited(trailing.words, trailing.instances[0]));

  // Following symbol word at the scope end itself.
  Sentence embedded = testutil::make_sentence({"a", "not", "b", "c."});
  embedded.instances.push_back(testutil::normal_cue(1, {2, 3}));
  CHECK(is_punct_delimited(embedded.words, embedded.instances[0]));

  // Punctuation exists but nowhere near the scope edges.
  Sentence free_sent = testutil::make_sentence(kFreeWords);
  free_sent.instances.push_back(testutil::normal_cue(2, {0, 1, 3, 7, 8, 9}));
  CHECK_FALSE(is_punct_delimited(free_sent.words, free_sent.instances[0]));

  // No punctuation at all.
  Sentence bare = testutil::make_sentence({"a", "not", "b"});
  bare.instances.push_back(testutil::normal_cue(1, {2}));
  CHECK_FALSE(is_punct_delimited(bare.words, bare.instances[0]));

  // The verdict depends on the symbol set in use.
  Sentence custom = testutil::make_sentence({"a", ":", "not", "b", "."});
  custom.instances.push_back(testutil::normal_cue(2, {3}));
  CHECK(is_punct_delimited(custom.words, custom.instances[0]));
  CHECK_FALSE(is_punct_delimited(custom.words, custom.instances[0], ":"));

  NegationInstance no_scope = testutil::normal_cue(1, {});
  CHECK_THROWS_AS(is_punct_delimited(bare.words, no_scope), ArgumentError);
  NegationInstance no_cue;
  no_cue.scope = {1};
  CHECK_THROWS_AS(is_punct_delimited(bare.words, no_cue), ArgumentError);
}

TEST_CASE("punctuation report: partition and exact-match rates") {
  const std::vector<Sentence> gold = sherlock_fixture();
  REQUIRE(gold.size() == 15);

  const PunctReport ident = punct_pcs_report(gold, gold);
  CHECK(ident.n_instances == 12);
  CHECK(ident.n_empty_scope == 1);  // the bare exclamation instance
  CHECK(ident.n_delimited == 11);
  CHECK(ident.n_free == 1);
  CHECK(ident.delimited_exact == 11);
  CHECK(ident.free_exact == 1);
  CHECK(ident.pcs_delimited == 100.0);
  CHECK(ident.pcs_free == 100.0);
  CHECK(ident.pcs_overall == 100.0);
  CHECK_FALSE(ident.pcs_delimited_undefined);
  CHECK_FALSE(ident.pcs_free_undefined);

  // Break the one free-scope prediction and drop another sentence's
  // prediction entirely.
  std::vector<Sentence> pred = gold;
  pred[13].instances[0].scope = {0, 1};
  pred[1].instances.clear();
  const PunctReport broken = punct_pcs_report(gold, pred);
  CHECK(broken.n_delimited == 11);
  CHECK(broken.n_free == 1);
  CHECK(broken.delimited_exact == 10);
  CHECK(broken.free_exact == 0);
  CHECK(broken.pcs_delimited == doctest::Approx(100.0 * 10 / 11));
  CHECK(broken.pcs_free == 0.0);
  CHECK(broken.pcs_overall == doctest::Approx(100.0 * 10 / 12));

  CHECK_THROWS_AS(punct_pcs_report(gold, std::vector<Sentence>{}), ArgumentError);
}

TEST_CASE("punctuation report: empty partitions are flagged, not divided") {
  const std::vector<Sentence> none;
  const PunctReport empty = punct_pcs_report(none, none);
  CHECK(empty.n_instances == 0);
  CHECK(empty.pcs_delimited_undefined);
  CHECK(empty.pcs_free_undefined);
  CHECK(empty.pcs_overall_undefined);

  // Instances without a cue or scope fall out of the partition.
  Sentence odd = testutil::make_sentence({"a", "b"});
  NegationInstance cueless;
  cueless.scope = {1};
  odd.instances.push_back(cueless);
  odd.instances.push_back(testutil::normal_cue(0, {}));
  const PunctReport excluded = punct_pcs_report({odd}, {odd});
  CHECK(excluded.n_instances == 0);
  CHECK(excluded.n_empty_scope == 2);
}

TEST_CASE("punctuation report: json and text rendering") {
  const std::vector<Sentence> gold = sherlock_fixture();
  const PunctReport r = punct_pcs_report(gold, gold);

  std::ostringstream js;
  write_punct_json(r, js);
  const nlohmann::json j = nlohmann::json::parse(js.str());
  CHECK(j["n_instances"] == 12);
  CHECK(j["n_empty_scope"] == 1);
  CHECK(j["n_delimited"] == 11);
  CHECK(j["n_free"] == 1);
  CHECK(j["pcs_delimited"] == 100.0);
  CHECK(j["pcs_overall_undefined"] == false);

  std::ostringstream text;
  write_punct_text(r, text);
  const std::string t = text.str();
  CHECK(t.find("partition  instances  exact  pcs") != std::string::npos);
  CHECK(t.find("delimited  11") != std::string::npos);
  CHECK(t.find("free       1") != std::string::npos);
  CHECK(t.find("overall    12") != std::string::npos);
  CHECK(t.find("(1 empty-scope instances excluded)") != std::string::npos);
}
