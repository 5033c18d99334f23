#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "negscope/corpus.hpp"
#include "negscope/decode.hpp"
#include "negscope/encoding.hpp"

namespace negscope {

struct EvalReport {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  //  A ratio with a zero denominator is reported as 0 and flagged.
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;

  // Scope evaluation only: share of gold instances whose scope set was
  // reproduced exactly, as a percentage.
  double pcs = 0;
  long long pcs_exact = 0;
  long long pcs_total = 0;
  bool pcs_undefined = false;

  long long n_sentences = 0;
  long long n_instances = 0;  // gold instances
  long long n_overflow = 0;   // filled in by the caller from BatchPrediction
  std::string train_label;
  std::string test_label;
};

// Word-level cue precision/recall/F1. With `merge_affix`, affix and normal
// cue labels count as one class, which makes corpora with and without affix
// annotation comparable. Gold and predicted sentences must align pairwise.
EvalReport cue_prf(const std::vector<Sentence>& gold, const std::vector<Sentence>& pred,
                   bool merge_affix);

enum class ScopeEvalMode {
  kGoldCue,       // instances align by position within the sentence
  kPredictedCue,  // instances align by cue word set, then by overlap
};

// Token-level scope precision/recall/F1 over scope word sets, plus exact
// scope match (pcs fields). Gold instances without a matching prediction
// count their whole scope as misses; unmatched predictions as false alarms.
EvalReport scope_token_prf(const std::vector<Sentence>& gold, const std::vector<Sentence>& pred,
                           ScopeEvalMode mode);

// Percentage of gold instances with an exactly reproduced scope set.
double pcs(const std::vector<Sentence>& gold, const std::vector<Sentence>& pred,
           ScopeEvalMode mode);

// One trained model in a cross-corpus comparison: the corpus it was trained
// on plus a callback that tags a test set.
struct CrossPredictor {
  CorpusId train_id = CorpusId::kCustom;
  std::string train_label;
  std::function<BatchPrediction(const std::vector<Sentence>&)> predict;
};

struct CrossMatrix {
  Task task = Task::kCue;
  std::vector<std::string> train_labels;           // columns
  std::vector<std::string> test_labels;            // rows
  std::vector<std::vector<EvalReport>> cells;      // [test][train]
};

// Runs every predictor on every test corpus. Cue cells merge affix and
// normal labels automatically when exactly one side of the pair has affix
// annotation; scope cells use `mode`.
CrossMatrix cross_matrix(const std::vector<CrossPredictor>& predictors,
                         const std::vector<const Corpus*>& test_sets, Task task,
                         ScopeEvalMode mode = ScopeEvalMode::kGoldCue);

void write_report_json(const EvalReport& report, std::ostream& out);
void write_matrix_json(const CrossMatrix& matrix, std::ostream& out);
// Plain-text table, test corpora as rows and training corpora as columns;
// cue cells show F1, scope cells F1/PCS.
void write_matrix_text(const CrossMatrix& matrix, std::ostream& out);

}  // namespace negscope
