#include "negscope/eval.hpp"

#include <cstdio>
#include <ostream>
#include <set>

#include "json.hpp"
#include "negscope/errors.hpp"

namespace negscope {

namespace {

using nlohmann::json;

void finish_ratios(EvalReport& r) {
  if (r.tp + r.fp > 0)
    r.precision = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
  else
    r.precision_undefined = true;
  if (r.tp + r.fn > 0)
    r.recall = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
  else
    r.recall_undefined = true;
  if (r.precision + r.recall > 0)
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  else
    r.f1_undefined = true;
  if (r.pcs_total > 0)
    r.pcs = 100.0 * static_cast<double>(r.pcs_exact) / static_cast<double>(r.pcs_total);
  else
    r.pcs_undefined = true;
}

void check_aligned(const std::vector<Sentence>& gold, const std::vector<Sentence>& pred) {
  if (gold.size() != pred.size())
    throw ArgumentError("gold and predicted corpora differ in sentence count: " +
                        std::to_string(gold.size()) + " vs " + std::to_string(pred.size()));
  for (size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].words.size() != pred[i].words.size())
      throw ArgumentError(describe(gold[i].source) + ": gold and predicted word counts differ");
  }
}

std::set<int> cue_word_set(const Cue& cue) {
  std::set<int> out;
  for (const CuePart& p : cue.parts) out.insert(p.word_index);
  return out;
}

size_t overlap_size(const std::set<int>& a, const std::set<int>& b) {
  size_t n = 0;
  for (int v : a)
    if (b.count(v)) ++n;
  return n;
}

void score_scope_pair(EvalReport& r, const std::set<int>& gold, const std::set<int>& pred) {
  for (int w : gold) {
    if (pred.count(w))
      ++r.tp;
    else
      ++r.fn;
  }
  for (int w : pred)
    if (!gold.count(w)) ++r.fp;
  ++r.pcs_total;
  if (gold == pred) ++r.pcs_exact;
}

json report_json(const EvalReport& r) {
  json j;
  if (!r.train_label.empty()) j["train"] = r.train_label;
  if (!r.test_label.empty()) j["test"] = r.test_label;
  j["tp"] = r.tp;
  j["fp"] = r.fp;
  j["fn"] = r.fn;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  j["precision_undefined"] = r.precision_undefined;
  j["recall_undefined"] = r.recall_undefined;
  j["f1_undefined"] = r.f1_undefined;
  j["pcs"] = r.pcs;
  j["pcs_exact"] = r.pcs_exact;
  j["pcs_total"] = r.pcs_total;
  j["pcs_undefined"] = r.pcs_undefined;
  j["n_sentences"] = r.n_sentences;
  j["n_instances"] = r.n_instances;
  j["n_overflow"] = r.n_overflow;
  return j;
}

std::string format_cell(const EvalReport& r, Task task) {
  char buf[64];
  if (task == Task::kCue)
    std::snprintf(buf, sizeof buf, "%.2f", 100.0 * r.f1);
  else
    std::snprintf(buf, sizeof buf, "%.2f/%.1f", 100.0 * r.f1, r.pcs);
  return buf;
}

}  // namespace

EvalReport cue_prf(const std::vector<Sentence>& gold, const std::vector<Sentence>& pred,
                   bool merge_affix) {
  check_aligned(gold, pred);
  EvalReport r;
  r.n_sentences = static_cast<long long>(gold.size());
  for (size_t i = 0; i < gold.size(); ++i) {
    std::vector<int> g = cue_labels(gold[i]);
    std::vector<int> p = cue_labels(pred[i]);
    if (merge_affix) {
      for (int& v : g)
        if (v == kCueAffix) v = kCueNormal;
      for (int& v : p)
        if (v == kCueAffix) v = kCueNormal;
    }
    for (size_t w = 0; w < g.size(); ++w) {
      const bool gc = g[w] != kCueNone;
      const bool pc = p[w] != kCueNone;
      if (gc && pc) {
        if (g[w] == p[w]) {
          ++r.tp;
        } else {
          ++r.fp;
          ++r.fn;
        }
      } else if (pc) {
        ++r.fp;
      } else if (gc) {
        ++r.fn;
      }
    }
    r.n_instances += static_cast<long long>(gold[i].instances.size());
  }
  finish_ratios(r);
  return r;
}

EvalReport scope_token_prf(const std::vector<Sentence>& gold, const std::vector<Sentence>& pred,
                           ScopeEvalMode mode) {
  check_aligned(gold, pred);
  EvalReport r;
  r.n_sentences = static_cast<long long>(gold.size());
  for (size_t i = 0; i < gold.size(); ++i) {
    const auto& ginst = gold[i].instances;
    const auto& pinst = pred[i].instances;
    r.n_instances += static_cast<long long>(ginst.size());

    if (mode == ScopeEvalMode::kGoldCue) {
      for (size_t k = 0; k < ginst.size(); ++k) {
        if (k < pinst.size()) {
          score_scope_pair(r, ginst[k].scope, pinst[k].scope);
        } else {
          r.fn += static_cast<long long>(ginst[k].scope.size());
          ++r.pcs_total;
        }
      }
      for (size_t k = ginst.size(); k < pinst.size(); ++k)
        r.fp += static_cast<long long>(pinst[k].scope.size());
      continue;
    }

    std::vector<std::set<int>> pred_cues;
    pred_cues.reserve(pinst.size());
    for (const NegationInstance& inst : pinst) pred_cues.push_back(cue_word_set(inst.cue));
    std::vector<bool> used(pinst.size(), false);
    for (const NegationInstance& g : ginst) {
      const std::set<int> gset = cue_word_set(g.cue);
      int best = -1;
      for (size_t j = 0; j < pinst.size(); ++j) {
        if (!used[j] && pred_cues[j] == gset) {
          best = static_cast<int>(j);
          break;
        }
      }
      if (best < 0) {
        size_t best_overlap = 0;
        for (size_t j = 0; j < pinst.size(); ++j) {
          if (used[j]) continue;
          const size_t ov = overlap_size(pred_cues[j], gset);
          if (ov > best_overlap) {
            best_overlap = ov;
            best = static_cast<int>(j);
          }
        }
      }
      if (best >= 0) {
        used[static_cast<size_t>(best)] = true;
        score_scope_pair(r, g.scope, pinst[static_cast<size_t>(best)].scope);
      } else {
        r.fn += static_cast<long long>(g.scope.size());
        ++r.pcs_total;
      }
    }
    for (size_t j = 0; j < pinst.size(); ++j)
      if (!used[j]) r.fp += static_cast<long long>(pinst[j].scope.size());
  }
  finish_ratios(r);
  return r;
}

double pcs(const std::vector<Sentence>& gold, const std::vector<Sentence>& pred,
           ScopeEvalMode mode) {
  return scope_token_prf(gold, pred, mode).pcs;
}

CrossMatrix cross_matrix(const std::vector<CrossPredictor>& predictors,
                         const std::vector<const Corpus*>& test_sets, Task task,
                         ScopeEvalMode mode) {
  CrossMatrix m;
  m.task = task;
  for (const CrossPredictor& p : predictors) {
    if (!p.predict) throw ArgumentError("cross_matrix: predictor without a predict callback");
    m.train_labels.push_back(p.train_label.empty() ? to_string(p.train_id) : p.train_label);
  }
  for (const Corpus* t : test_sets) {
    if (!t) throw ArgumentError("cross_matrix: null test corpus");
    m.test_labels.push_back(t->label.empty() ? to_string(t->id) : t->label);
  }
  for (size_t ti = 0; ti < test_sets.size(); ++ti) {
    const Corpus& test = *test_sets[ti];
    std::vector<EvalReport> row;
    for (size_t pi = 0; pi < predictors.size(); ++pi) {
      const CrossPredictor& p = predictors[pi];
      BatchPrediction bp = p.predict(test.sentences);
      EvalReport r;
      if (task == Task::kCue) {
        const bool merge = has_affix_annotation(p.train_id) != has_affix_annotation(test.id);
        r = cue_prf(test.sentences, bp.sentences, merge);
      } else {
        r = scope_token_prf(test.sentences, bp.sentences, mode);
      }
      r.n_overflow = bp.n_overflow;
      r.train_label = m.train_labels[pi];
      r.test_label = m.test_labels[ti];
      row.push_back(std::move(r));
    }
    m.cells.push_back(std::move(row));
  }
  return m;
}

void write_report_json(const EvalReport& report, std::ostream& out) {
  out << report_json(report).dump(2) << "\n";
}

void write_matrix_json(const CrossMatrix& matrix, std::ostream& out) {
  json j;
  j["task"] = to_string(matrix.task);
  j["rows"] = "test";
  j["columns"] = "train";
  j["train"] = matrix.train_labels;
  j["test"] = matrix.test_labels;
  json cells = json::array();
  for (const auto& row : matrix.cells) {
    json jrow = json::array();
    for (const EvalReport& r : row) jrow.push_back(report_json(r));
    cells.push_back(std::move(jrow));
  }
  j["cells"] = std::move(cells);
  out << j.dump(2) << "\n";
}

void write_matrix_text(const CrossMatrix& matrix, std::ostream& out) {
  const std::string corner = "test \\ train";
  std::vector<size_t> widths;
  widths.push_back(corner.size());
  for (const std::string& label : matrix.test_labels)
    widths[0] = std::max(widths[0], label.size());
  std::vector<std::vector<std::string>> cells(matrix.cells.size());
  for (size_t c = 0; c < matrix.train_labels.size(); ++c) {
    size_t w = matrix.train_labels[c].size();
    for (size_t t = 0; t < matrix.cells.size(); ++t) {
      cells[t].push_back(format_cell(matrix.cells[t][c], matrix.task));
      w = std::max(w, cells[t][c].size());
    }
    widths.push_back(w);
  }

  auto pad = [&out](const std::string& s, size_t w) {
    out << s << std::string(w - s.size(), ' ');
  };
  pad(corner, widths[0]);
  for (size_t c = 0; c < matrix.train_labels.size(); ++c) {
    out << "  ";
    pad(matrix.train_labels[c], widths[c + 1]);
  }
  out << "\n";
  for (size_t t = 0; t < matrix.test_labels.size(); ++t) {
    pad(matrix.test_labels[t], widths[0]);
    for (size_t c = 0; c < cells[t].size(); ++c) {
      out << "  ";
      pad(cells[t][c], widths[c + 1]);
    }
    out << "\n";
  }
  if (matrix.task != Task::kCue) out << "(cells: token F1 x100 / exact-scope %)\n";
}

}  // namespace negscope
