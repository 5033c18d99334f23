#include "negscope/punct.hpp"

#include <algorithm>
#include <ostream>

#include "json.hpp"
#include "negscope/errors.hpp"

namespace negscope {

namespace {

bool has_symbol(const std::string& word, const std::string& symbols) {
  for (char c : word)
    if (symbols.find(c) != std::string::npos) return true;
  return false;
}

double pct(long long exact, long long total, bool& undefined) {
  if (total <= 0) {
    undefined = true;
    return 0;
  }
  return 100.0 * static_cast<double>(exact) / static_cast<double>(total);
}

}  // namespace

std::string default_punct_symbols() {
  return "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";
}

PunctIndices punct_indices(const std::vector<std::string>& words, int cue_min, int cue_max,
                           const std::string& symbols) {
  PunctIndices out;
  for (int i = cue_min - 1; i >= 0; --i) {
    if (has_symbol(words[static_cast<size_t>(i)], symbols)) {
      out.first = i;
      break;
    }
  }
  for (int i = cue_max + 1; i < static_cast<int>(words.size()); ++i) {
    if (has_symbol(words[static_cast<size_t>(i)], symbols)) {
      out.last = i;
      break;
    }
  }
  return out;
}

bool is_punct_delimited(const std::vector<std::string>& words, const NegationInstance& inst,
                        const std::string& symbols) {
  if (inst.cue.parts.empty()) throw ArgumentError("is_punct_delimited: instance without a cue");
  if (inst.scope.empty()) throw ArgumentError("is_punct_delimited: instance with an empty scope");
  const std::vector<int> cue_words = inst.cue.word_indices();
  const int cue_min = *std::min_element(cue_words.begin(), cue_words.end());
  const int cue_max = *std::max_element(cue_words.begin(), cue_words.end());
  const PunctIndices p = punct_indices(words, cue_min, cue_max, symbols);
  const int scope_min = *inst.scope.begin();
  const int scope_max = *inst.scope.rbegin();
  if (p.first && (*p.first == scope_min || *p.first == scope_min - 1)) return true;
  if (p.last && (*p.last == scope_max || *p.last == scope_max + 1)) return true;
  return false;
}

PunctReport punct_pcs_report(const std::vector<Sentence>& gold,
                             const std::vector<Sentence>& pred, const std::string& symbols) {
  if (gold.size() != pred.size())
    throw ArgumentError("gold and predicted corpora differ in sentence count: " +
                        std::to_string(gold.size()) + " vs " + std::to_string(pred.size()));
  PunctReport r;
  for (size_t i = 0; i < gold.size(); ++i) {
    const auto& ginst = gold[i].instances;
    const auto& pinst = pred[i].instances;
    for (size_t k = 0; k < ginst.size(); ++k) {
      const NegationInstance& g = ginst[k];
      if (g.scope.empty() || g.cue.parts.empty()) {
        ++r.n_empty_scope;
        continue;
      }
      ++r.n_instances;
      const bool delimited = is_punct_delimited(gold[i].words, g, symbols);
      const bool exact = k < pinst.size() && pinst[k].scope == g.scope;
      if (delimited) {
        ++r.n_delimited;
        if (exact) ++r.delimited_exact;
      } else {
        ++r.n_free;
        if (exact) ++r.free_exact;
      }
    }
  }
  r.pcs_delimited = pct(r.delimited_exact, r.n_delimited, r.pcs_delimited_undefined);
  r.pcs_free = pct(r.free_exact, r.n_free, r.pcs_free_undefined);
  r.pcs_overall =
      pct(r.delimited_exact + r.free_exact, r.n_instances, r.pcs_overall_undefined);
  return r;
}

void write_punct_json(const PunctReport& report, std::ostream& out) {
  nlohmann::json j;
  j["n_instances"] = report.n_instances;
  j["n_empty_scope"] = report.n_empty_scope;
  j["n_delimited"] = report.n_delimited;
  j["n_free"] = report.n_free;
  j["delimited_exact"] = report.delimited_exact;
  j["free_exact"] = report.free_exact;
  j["pcs_delimited"] = report.pcs_delimited;
  j["pcs_free"] = report.pcs_free;
  j["pcs_overall"] = report.pcs_overall;
  j["pcs_delimited_undefined"] = report.pcs_delimited_undefined;
  j["pcs_free_undefined"] = report.pcs_free_undefined;
  j["pcs_overall_undefined"] = report.pcs_overall_undefined;
  out << j.dump(2) << "\n";
}

void write_punct_text(const PunctReport& report, std::ostream& out) {
  char buf[160];
  out << "partition  instances  exact  pcs\n";
  std::snprintf(buf, sizeof buf, "delimited  %-9lld  %-5lld  %.1f\n",
                report.n_delimited, report.delimited_exact, report.pcs_delimited);
  out << buf;
  std::snprintf(buf, sizeof buf, "free       %-9lld  %-5lld  %.1f\n", report.n_free,
                report.free_exact, report.pcs_free);
  out << buf;
  std::snprintf(buf, sizeof buf, "overall    %-9lld  %-5lld  %.1f\n", report.n_instances,
                report.delimited_exact + report.free_exact, report.pcs_overall);
  out << buf;
  if (report.n_empty_scope > 0)
    out << "(" << report.n_empty_scope << " empty-scope instances excluded)\n";
}

}  // namespace negscope
