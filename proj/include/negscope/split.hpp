#pragma once

#include <cstdint>
#include <iosfwd>

#include "negscope/corpus.hpp"

namespace negscope {

struct SplitRatios {
  double train = 0.7;
  double dev = 0.15;
  double test = 0.15;
};

struct SplitResult {
  Corpus train;
  Corpus dev;
  Corpus test;
  uint64_t seed = 0;
  SplitRatios ratios;
};

// Sentence-level split after a seeded shuffle. Ratios must sum to 1 within
// 1e-9 and be non-negative; the corpus must be non-empty. Part sizes are the
// rounded ratios, with the test part absorbing the remainder. The same seed
// always produces the same partition.
SplitResult split_corpus(const Corpus& corpus, SplitRatios ratios, uint64_t seed);

// One line per sentence: corpus, document, sentence number, partition name.
void write_split_manifest(const SplitResult& split, std::ostream& out);

}  // namespace negscope
