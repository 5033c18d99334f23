#include "negscope/jsonl.hpp"

#include <istream>
#include <ostream>

#include "json.hpp"
#include "negscope/errors.hpp"

namespace negscope {

namespace {

using nlohmann::json;

json instance_to_json(const NegationInstance& inst) {
  json j;
  j["class"] = to_string(inst.cue.cue_class);
  json parts = json::array();
  for (const CuePart& p : inst.cue.parts) {
    if (p.span) {
      parts.push_back({p.word_index, p.span->begin, p.span->end});
    } else {
      parts.push_back({p.word_index, -1, -1});
    }
  }
  j["parts"] = parts;
  j["scope"] = std::vector<int>(inst.scope.begin(), inst.scope.end());
  j["cue_in_scope"] = inst.scope_includes_cue;
  if (inst.raw) {
    json raw = json::array();
    for (const auto& [idx, cols] : inst.raw->by_word) {
      raw.push_back({idx, cols[0], cols[1], cols[2]});
    }
    j["raw"] = raw;
  }
  return j;
}

NegationInstance instance_from_json(const json& j) {
  NegationInstance inst;
  const std::string cls = j.at("class").get<std::string>();
  if (cls == "affix") inst.cue.cue_class = CueClass::kAffix;
  else if (cls == "normal") inst.cue.cue_class = CueClass::kNormal;
  else if (cls == "multiword") inst.cue.cue_class = CueClass::kMultiword;
  else throw ParseError("unknown cue class '" + cls + "'");
  for (const json& p : j.at("parts")) {
    CuePart part;
    part.word_index = p.at(0).get<int>();
    int b = p.at(1).get<int>(), e = p.at(2).get<int>();
    if (b >= 0) part.span = CharSpan{b, e};
    inst.cue.parts.push_back(part);
  }
  for (const json& w : j.at("scope")) inst.scope.insert(w.get<int>());
  inst.scope_includes_cue = j.at("cue_in_scope").get<bool>();
  if (j.contains("raw")) {
    CdscoRaw raw;
    for (const json& r : j.at("raw")) {
      raw.by_word[r.at(0).get<int>()] = {r.at(1).get<std::string>(), r.at(2).get<std::string>(),
                                         r.at(3).get<std::string>()};
    }
    inst.raw = std::move(raw);
  }
  return inst;
}

json sentence_to_json(const Sentence& s, const std::string& corpus_name, const std::string& label) {
  json j;
  j["corpus"] = corpus_name;
  if (!label.empty() && label != corpus_name) j["label"] = label;
  j["doc"] = s.source.document;
  j["sent"] = s.source.sentence_number;
  j["words"] = s.words;
  if (!s.word_meta.empty()) {
    json meta = json::array();
    for (const WordMeta& m : s.word_meta) meta.push_back({m.lemma, m.pos, m.syntax});
    j["meta"] = meta;
  }
  json instances = json::array();
  for (const NegationInstance& inst : s.instances) instances.push_back(instance_to_json(inst));
  j["instances"] = instances;
  return j;
}

}  // namespace

void write_jsonl_sentences(const std::vector<Sentence>& sentences, const std::string& corpus_name,
                           const std::string& label, std::ostream& out) {
  for (const Sentence& s : sentences) {
    out << sentence_to_json(s, corpus_name, label).dump() << "\n";
  }
}

void write_jsonl(const Corpus& corpus, std::ostream& out) {
  write_jsonl_sentences(corpus.sentences, to_string(corpus.id),
                        corpus.label.empty() ? to_string(corpus.id) : corpus.label, out);
}

Corpus read_jsonl(std::istream& in) {
  Corpus corpus;
  std::string line;
  int line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("jsonl line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      Sentence s;
      const std::string corpus_name = j.at("corpus").get<std::string>();
      s.source.corpus = corpus_name;
      s.source.document = j.at("doc").get<std::string>();
      s.source.sentence_number = j.at("sent").get<int>();
      s.words = j.at("words").get<std::vector<std::string>>();
      if (j.contains("meta")) {
        for (const json& m : j.at("meta")) {
          s.word_meta.push_back(WordMeta{m.at(0).get<std::string>(), m.at(1).get<std::string>(),
                                         m.at(2).get<std::string>()});
        }
      }
      for (const json& ij : j.at("instances")) s.instances.push_back(instance_from_json(ij));
      validate(s);
      if (first) {
        first = false;
        auto id = corpus_id_from_string(corpus_name);
        corpus.id = id.value_or(CorpusId::kCustom);
        corpus.label = j.contains("label") ? j.at("label").get<std::string>() : corpus_name;
      }
      corpus.sentences.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw ParseError("jsonl line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return corpus;
}

}  // namespace negscope
