#include "negscope/split.hpp"

#include <cmath>
#include <numeric>
#include <ostream>

#include "negscope/errors.hpp"
#include "negscope/rng.hpp"

namespace negscope {

SplitResult split_corpus(const Corpus& corpus, SplitRatios ratios, uint64_t seed) {
  if (corpus.sentences.empty()) throw ArgumentError("split_corpus: empty corpus");
  if (ratios.train < 0 || ratios.dev < 0 || ratios.test < 0)
    throw ArgumentError("split_corpus: ratios must be non-negative");
  const double sum = ratios.train + ratios.dev + ratios.test;
  if (std::abs(sum - 1.0) > 1e-9)
    throw ArgumentError("split_corpus: ratios sum to " + std::to_string(sum) + ", expected 1");

  const size_t n = corpus.sentences.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  size_t n_train = static_cast<size_t>(std::llround(ratios.train * static_cast<double>(n)));
  n_train = std::min(n_train, n);
  size_t n_dev = static_cast<size_t>(std::llround(ratios.dev * static_cast<double>(n)));
  n_dev = std::min(n_dev, n - n_train);

  SplitResult out;
  out.seed = seed;
  out.ratios = ratios;
  const std::string base = corpus.label.empty() ? to_string(corpus.id) : corpus.label;
  for (Corpus* part : {&out.train, &out.dev, &out.test}) part->id = corpus.id;
  out.train.label = base + "/train";
  out.dev.label = base + "/dev";
  out.test.label = base + "/test";
  for (size_t i = 0; i < n; ++i) {
    const Sentence& s = corpus.sentences[order[i]];
    if (i < n_train) {
      out.train.sentences.push_back(s);
    } else if (i < n_train + n_dev) {
      out.dev.sentences.push_back(s);
    } else {
      out.test.sentences.push_back(s);
    }
  }
  return out;
}

void write_split_manifest(const SplitResult& split, std::ostream& out) {
  out << "# seed=" << split.seed << "\n";
  out << "# ratios=" << split.ratios.train << "," << split.ratios.dev << "," << split.ratios.test
      << "\n";
  const std::pair<const Corpus*, const char*> parts[] = {
      {&split.train, "train"}, {&split.dev, "dev"}, {&split.test, "test"}};
  for (const auto& [part, name] : parts) {
    for (const Sentence& s : part->sentences) {
      out << s.source.corpus << '\t' << s.source.document << '\t' << s.source.sentence_number
          << '\t' << name << '\n';
    }
  }
}

}  // namespace negscope
