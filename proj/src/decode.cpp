#include "negscope/decode.hpp"

#include <algorithm>

#include "negscope/errors.hpp"

namespace negscope {

namespace {

std::vector<int> word_label_vector(const std::vector<WordPrediction>& preds) {
  std::vector<int> labels(preds.size());
  for (size_t i = 0; i < preds.size(); ++i) labels[i] = preds[i].label;
  return labels;
}

// Aligns a predicted scope set with the requested convention: whole-word cue
// positions are forced in or out, affix hosts keep whatever was predicted.
void apply_scope_convention(std::set<int>& scope, const Cue& cue, bool include_cue) {
  for (const CuePart& part : cue.parts) {
    if (part.span.has_value()) continue;
    if (include_cue)
      scope.insert(part.word_index);
    else
      scope.erase(part.word_index);
  }
}

// Scope stage over sentences that already carry cues (gold or predicted).
// `convention` overrides each instance's own scope_includes_cue when set.
BatchPrediction fill_scopes(TaggerModel& model, const std::vector<Sentence>& input,
                            MarkStrategy strategy, std::optional<bool> convention) {
  BatchPrediction out;
  out.sentences = input;
  for (Sentence& s : out.sentences) {
    for (NegationInstance& inst : s.instances) {
      inst.scope.clear();
      inst.raw.reset();
    }
  }

  const SubwordTokenizer& tok = model.backend().tokenizer();
  std::vector<TokenizedExample> examples;
  std::vector<std::pair<size_t, size_t>> where;  // sentence, instance
  std::vector<MarkedWords> markings;
  for (size_t si = 0; si < input.size(); ++si) {
    const Sentence& s = input[si];
    for (size_t ii = 0; ii < s.instances.size(); ++ii) {
      MarkedWords marked = mark_cues(s, s.instances[ii], strategy);
      std::vector<int> fill(marked.words.size(), kScopeOut);
      try {
        examples.push_back(
            align_to_subwords(marked.words, fill, tok, model.max_len(), kScopePad, s.source));
      } catch (const OverflowError&) {
        ++out.n_overflow;
        out.overflow_sources.push_back(s.source);
        continue;
      }
      where.emplace_back(si, ii);
      markings.push_back(std::move(marked));
    }
  }

  const auto dists = model.predict_distributions(examples);
  for (size_t j = 0; j < examples.size(); ++j) {
    const auto preds = aggregate_to_words(dists[j], examples[j].alignment);
    const auto [si, ii] = where[j];
    NegationInstance& inst = out.sentences[si].instances[ii];
    const std::vector<int>& remap = markings[j].remap;
    for (size_t w = 0; w < remap.size(); ++w) {
      if (preds[static_cast<size_t>(remap[w])].label == kScopeIn)
        inst.scope.insert(static_cast<int>(w));
    }
    const bool include = convention.value_or(inst.scope_includes_cue);
    apply_scope_convention(inst.scope, inst.cue, include);
    inst.scope_includes_cue = include;
  }
  return out;
}

}  // namespace

std::vector<WordPrediction> aggregate_to_words(
    const std::vector<std::vector<float>>& token_distributions,
    const std::vector<std::pair<int, int>>& alignment) {
  const int n_tokens = static_cast<int>(token_distributions.size());
  std::vector<WordPrediction> out;
  out.reserve(alignment.size());
  for (size_t w = 0; w < alignment.size(); ++w) {
    const auto [begin, end] = alignment[w];
    if (begin < 0 || begin >= end || end > n_tokens)
      throw InternalError("word " + std::to_string(w) + ": bad token range [" +
                          std::to_string(begin) + ", " + std::to_string(end) + ") of " +
                          std::to_string(n_tokens));
    const size_t n_classes = token_distributions[static_cast<size_t>(begin)].size();
    if (n_classes < 2) throw InternalError("token distributions need at least two classes");
    std::vector<float> mean(n_classes - 1, 0.0f);  // padding class dropped
    for (int t = begin; t < end; ++t) {
      const auto& dist = token_distributions[static_cast<size_t>(t)];
      if (dist.size() != n_classes) throw InternalError("ragged token distributions");
      for (size_t c = 0; c + 1 < n_classes; ++c) mean[c] += dist[c];
    }
    float total = 0.0f;
    for (float& v : mean) {
      v /= static_cast<float>(end - begin);
      total += v;
    }
    if (total > 0.0f) {
      for (float& v : mean) v /= total;
    } else {
      for (float& v : mean) v = 1.0f / static_cast<float>(mean.size());
    }
    int label = 0;
    for (size_t c = 1; c < mean.size(); ++c) {
      if (mean[c] > mean[static_cast<size_t>(label)]) label = static_cast<int>(c);
    }
    out.push_back(WordPrediction{static_cast<int>(w), std::move(mean), label});
  }
  return out;
}

std::vector<Cue> extract_cues(const std::vector<int>& word_labels) {
  std::vector<Cue> cues;
  std::vector<CuePart> multi;
  for (size_t w = 0; w < word_labels.size(); ++w) {
    const int idx = static_cast<int>(w);
    switch (word_labels[w]) {
      case kCueAffix:
        cues.push_back(Cue{CueClass::kAffix, {CuePart{idx, std::nullopt}}});
        break;
      case kCueNormal:
        cues.push_back(Cue{CueClass::kNormal, {CuePart{idx, std::nullopt}}});
        break;
      case kCueMulti:
        multi.push_back(CuePart{idx, std::nullopt});
        break;
      default:
        break;
    }
  }
  if (!multi.empty()) cues.push_back(Cue{CueClass::kMultiword, std::move(multi)});
  return cues;
}

BatchPrediction predict_cues(TaggerModel& model, const std::vector<Sentence>& gold) {
  BatchPrediction out;
  out.sentences = gold;
  for (Sentence& s : out.sentences) s.instances.clear();

  const SubwordTokenizer& tok = model.backend().tokenizer();
  std::vector<TokenizedExample> examples;
  std::vector<size_t> where;
  for (size_t si = 0; si < gold.size(); ++si) {
    const Sentence& s = gold[si];
    std::vector<int> fill(s.words.size(), kCueNone);
    try {
      examples.push_back(
          align_to_subwords(s.words, fill, tok, model.max_len(), kCuePad, s.source));
    } catch (const OverflowError&) {
      ++out.n_overflow;
      out.overflow_sources.push_back(s.source);
      continue;
    }
    where.push_back(si);
  }

  const auto dists = model.predict_distributions(examples);
  for (size_t j = 0; j < examples.size(); ++j) {
    const auto preds = aggregate_to_words(dists[j], examples[j].alignment);
    for (Cue& cue : extract_cues(word_label_vector(preds))) {
      out.sentences[where[j]].instances.push_back(
          NegationInstance{std::move(cue), {}, false, std::nullopt});
    }
  }
  return out;
}

BatchPrediction predict_scopes_gold_cue(TaggerModel& model, const std::vector<Sentence>& gold,
                                        MarkStrategy strategy) {
  return fill_scopes(model, gold, strategy, std::nullopt);
}

BatchPrediction predict_end_to_end(TaggerModel& cue_model, TaggerModel& scope_model,
                                   const std::vector<Sentence>& gold, MarkStrategy strategy,
                                   bool scope_includes_cue) {
  BatchPrediction cued = predict_cues(cue_model, gold);
  BatchPrediction out = fill_scopes(scope_model, cued.sentences, strategy, scope_includes_cue);
  out.n_overflow += cued.n_overflow;
  out.overflow_sources.insert(out.overflow_sources.begin(), cued.overflow_sources.begin(),
                              cued.overflow_sources.end());
  return out;
}

Sentence run_pipeline(const Sentence& s, TaggerModel& cue_model, TaggerModel& scope_model,
                      MarkStrategy strategy, bool scope_includes_cue) {
  BatchPrediction out =
      predict_end_to_end(cue_model, scope_model, {s}, strategy, scope_includes_cue);
  return std::move(out.sentences[0]);
}

}  // namespace negscope
