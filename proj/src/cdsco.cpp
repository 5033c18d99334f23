#include "negscope/cdsco.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "negscope/errors.hpp"

namespace negscope {

namespace {

constexpr int kFixedCols = 7;  // doc, sent, token, word, lemma, pos, syntax

struct RawLine {
  int number = 0;
  std::vector<std::string> fields;
};

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return out;
}

int parse_int_field(const std::string& s, int line_no, const char* what) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what + " is not an integer: '" +
                     s + "'");
  }
}

// Locate the cue form inside the word: prefer an exact prefix, then an
// exact suffix, then the first occurrence anywhere.
size_t locate_cue(const std::string& word, const std::string& cue) {
  if (word.compare(0, cue.size(), cue) == 0) return 0;
  if (word.size() >= cue.size() &&
      word.compare(word.size() - cue.size(), cue.size(), cue) == 0)
    return word.size() - cue.size();
  return word.find(cue);
}

Sentence parse_block(const std::vector<RawLine>& lines, const std::string& corpus_name,
                     std::vector<std::string>* warnings) {
  const size_t ncols = lines[0].fields.size();
  for (const RawLine& l : lines) {
    if (l.fields.size() != ncols)
      throw ParseError("line " + std::to_string(l.number) + ": ragged column count (" +
                       std::to_string(l.fields.size()) + " vs " + std::to_string(ncols) + ")");
  }
  if (ncols < kFixedCols + 1)
    throw ParseError("line " + std::to_string(lines[0].number) +
                     ": expected at least 8 tab-separated columns, got " + std::to_string(ncols));

  Sentence s;
  s.source.corpus = corpus_name;
  s.source.document = lines[0].fields[0];
  s.source.sentence_number = parse_int_field(lines[0].fields[1], lines[0].number, "sentence number");

  for (size_t i = 0; i < lines.size(); ++i) {
    const auto& f = lines[i].fields;
    int tok = parse_int_field(f[2], lines[i].number, "token number");
    if (tok != static_cast<int>(i) && warnings)
      warnings->push_back("line " + std::to_string(lines[i].number) +
                          ": token number " + std::to_string(tok) + " does not match position " +
                          std::to_string(i));
    s.words.push_back(f[3]);
    s.word_meta.push_back(WordMeta{f[4], f[5], f[6]});
  }

  const bool no_negation = ncols == kFixedCols + 1;
  if (no_negation) {
    for (const RawLine& l : lines) {
      if (l.fields[kFixedCols] != "***")
        throw ParseError("line " + std::to_string(l.number) +
                         ": expected '***' in the single annotation column, got '" +
                         l.fields[kFixedCols] + "'");
    }
    return s;
  }

  if ((ncols - kFixedCols) % 3 != 0)
    throw ParseError("line " + std::to_string(lines[0].number) +
                     ": annotation columns must come in cue/scope/event triples, got " +
                     std::to_string(ncols - kFixedCols));

  const size_t n_instances = (ncols - kFixedCols) / 3;
  for (size_t k = 0; k < n_instances; ++k) {
    NegationInstance inst;
    inst.raw = CdscoRaw{};
    for (size_t i = 0; i < lines.size(); ++i) {
      const auto& f = lines[i].fields;
      const std::string& cue_form = f[kFixedCols + 3 * k];
      const std::string& scope_form = f[kFixedCols + 3 * k + 1];
      const std::string& event_form = f[kFixedCols + 3 * k + 2];
      if (cue_form == "***" || scope_form == "***" || event_form == "***")
        throw ParseError("line " + std::to_string(lines[i].number) +
                         ": '***' mixed with instance columns");
      if (cue_form == "_" && scope_form == "_" && event_form == "_") continue;
      inst.raw->by_word[static_cast<int>(i)] = {cue_form == "_" ? "" : cue_form,
                                                scope_form == "_" ? "" : scope_form,
                                                event_form == "_" ? "" : event_form};
      if (cue_form != "_") {
        const std::string& word = f[3];
        CuePart part;
        part.word_index = static_cast<int>(i);
        if (cue_form != word) {
          size_t pos = locate_cue(word, cue_form);
          if (pos == std::string::npos)
            throw ParseError("line " + std::to_string(lines[i].number) + ": cue form '" +
                             cue_form + "' is not a sub-string of word '" + word + "'");
          part.span = CharSpan{static_cast<int>(pos), static_cast<int>(pos + cue_form.size())};
        }
        inst.cue.parts.push_back(part);
      }
      if (scope_form != "_") inst.scope.insert(static_cast<int>(i));
    }
    if (inst.cue.parts.empty())
      throw ParseError("line " + std::to_string(lines[0].number) + ": instance " +
                       std::to_string(k) + " has scope or event columns but no cue");
    if (inst.cue.parts.size() >= 2) {
      inst.cue.cue_class = CueClass::kMultiword;
    } else if (inst.cue.parts[0].span) {
      inst.cue.cue_class = CueClass::kAffix;
    } else {
      inst.cue.cue_class = CueClass::kNormal;
    }
    inst.scope_includes_cue = false;
    if (inst.cue.cue_class != CueClass::kAffix) {
      bool cue_in_scope = false;
      for (const CuePart& p : inst.cue.parts) cue_in_scope |= inst.scope.count(p.word_index) > 0;
      if (cue_in_scope) {
        // Unusual for this format; keep the annotation and record the fact.
        inst.scope_includes_cue = true;
        if (warnings)
          warnings->push_back(describe(s.source) + ": instance " + std::to_string(k) +
                              " has its own cue word inside the scope");
      }
    }
    s.instances.push_back(std::move(inst));
  }
  validate(s);
  return s;
}

// Annotation triple for word `i` of `inst`, derived from the structured data.
std::array<std::string, 3> derive_columns(const Sentence& s, const NegationInstance& inst, int i) {
  std::array<std::string, 3> out = {"_", "_", "_"};
  const std::string& word = s.words[i];
  const CuePart* part = inst.cue.part_at(i);
  if (part) {
    out[0] = part->span ? word.substr(part->span->begin, part->span->end - part->span->begin)
                        : word;
  }
  if (inst.scope.count(i)) {
    if (part && part->span) {
      // Scope column holds the word minus the affix.
      out[1] = word.substr(0, part->span->begin) + word.substr(part->span->end);
    } else {
      out[1] = word;
    }
  }
  return out;
}

}  // namespace

std::vector<Sentence> parse_cdsco(std::istream& in, const std::string& corpus_name,
                                  std::vector<std::string>* warnings) {
  std::vector<Sentence> sentences;
  std::vector<RawLine> block;
  std::string line;
  int line_no = 0;
  auto flush = [&]() {
    if (!block.empty()) {
      sentences.push_back(parse_block(block, corpus_name, warnings));
      block.clear();
    }
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    block.push_back(RawLine{line_no, split_tabs(line)});
  }
  flush();
  return sentences;
}

void write_cdsco(const std::vector<Sentence>& sentences, std::ostream& out) {
  for (const Sentence& s : sentences) {
    for (int i = 0; i < s.size(); ++i) {
      const WordMeta meta = s.word_meta.empty() ? WordMeta{} : s.word_meta[i];
      out << s.source.document << '\t' << s.source.sentence_number << '\t' << i << '\t'
          << s.words[i] << '\t' << meta.lemma << '\t' << meta.pos << '\t' << meta.syntax;
      if (s.instances.empty()) {
        out << '\t' << "***";
      } else {
        for (const NegationInstance& inst : s.instances) {
          std::array<std::string, 3> cols = {"_", "_", "_"};
          bool from_raw = false;
          if (inst.raw) {
            auto it = inst.raw->by_word.find(i);
            if (it != inst.raw->by_word.end()) {
              for (int c = 0; c < 3; ++c) cols[c] = it->second[c].empty() ? "_" : it->second[c];
              from_raw = true;
            } else {
              from_raw = true;  // raw present means all annotated words are recorded
            }
          }
          if (!from_raw) cols = derive_columns(s, inst, i);
          out << '\t' << cols[0] << '\t' << cols[1] << '\t' << cols[2];
        }
      }
      out << '\n';
    }
    out << '\n';
  }
}

}  // namespace negscope
