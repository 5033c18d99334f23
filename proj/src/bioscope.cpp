#include "negscope/bioscope.hpp"

#include <algorithm>
#include <cctype>

#include "negscope/errors.hpp"
#include "negscope/xml.hpp"

namespace negscope {

namespace {

std::string lower_copy(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

void append_words(const std::string& text, std::vector<std::string>& words) {
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) words.push_back(text.substr(start, i - start));
  }
}

struct MarkedSpan {
  bool is_cue = false;
  std::string type;  // cue only, lower-cased
  std::string id;    // id/ID attribute
  std::string ref;   // ref attribute (cue only)
  int begin = 0;
  int end = 0;
  int depth = 0;
};

// Word boundaries fall at whitespace and at element boundaries, so markup
// like "(<cue>not</cue> shown)" yields "(", "not", "shown)".
void walk_sentence(const xml::Node& node, int depth, std::vector<std::string>& words,
                   std::vector<MarkedSpan>& spans) {
  for (const xml::Node& child : node.children) {
    if (child.kind == xml::Node::Kind::kText) {
      append_words(child.text, words);
      continue;
    }
    const bool is_cue = xml::name_is(child, "cue");
    const bool is_scope = xml::name_is(child, "xcope");
    const int begin = static_cast<int>(words.size());
    walk_sentence(child, depth + 1, words, spans);
    if (!is_cue && !is_scope) continue;
    MarkedSpan span;
    span.is_cue = is_cue;
    span.begin = begin;
    span.end = static_cast<int>(words.size());
    span.depth = depth;
    if (const std::string* id = child.attr("id")) span.id = *id;
    if (is_cue) {
      if (const std::string* t = child.attr("type")) span.type = lower_copy(*t);
      if (const std::string* r = child.attr("ref")) span.ref = *r;
    }
    spans.push_back(span);
  }
}

struct SentenceContext {
  std::string corpus;
  std::string document;
  int sentence_number = 0;
  bool scope_includes_cue = false;
  std::vector<std::string>* warnings = nullptr;
};

void warn(const SentenceContext& ctx, const std::string& msg) {
  if (ctx.warnings) ctx.warnings->push_back(msg);
}

const MarkedSpan* link_scope(const MarkedSpan& cue, const std::vector<MarkedSpan>& spans) {
  auto by_id = [&](const std::string& key) -> const MarkedSpan* {
    if (key.empty()) return nullptr;
    for (const MarkedSpan& s : spans) {
      if (!s.is_cue && s.id == key) return &s;
    }
    return nullptr;
  };
  if (const MarkedSpan* s = by_id(cue.ref)) return s;
  if (const MarkedSpan* s = by_id(cue.id)) return s;
  // Innermost enclosing scope.
  const MarkedSpan* best = nullptr;
  for (const MarkedSpan& s : spans) {
    if (s.is_cue) continue;
    if (s.begin <= cue.begin && cue.end <= s.end) {
      if (!best || s.depth > best->depth) best = &s;
    }
  }
  return best;
}

std::optional<Sentence> parse_sentence_element(const xml::Node& node, const SentenceContext& ctx) {
  Sentence s;
  s.source.corpus = ctx.corpus;
  s.source.document = ctx.document;
  s.source.sentence_number = ctx.sentence_number;

  std::vector<MarkedSpan> spans;
  walk_sentence(node, 0, s.words, spans);
  if (s.words.empty()) {
    warn(ctx, describe(s.source) + ": sentence element with no words, skipped");
    return std::nullopt;
  }

  for (const MarkedSpan& cue : spans) {
    if (!cue.is_cue || cue.type != "negation") continue;
    if (cue.begin == cue.end) {
      warn(ctx, describe(s.source) + ": empty negation cue element, skipped");
      continue;
    }
    NegationInstance inst;
    for (int w = cue.begin; w < cue.end; ++w) inst.cue.parts.push_back(CuePart{w, std::nullopt});
    inst.cue.cue_class =
        inst.cue.parts.size() >= 2 ? CueClass::kMultiword : CueClass::kNormal;
    const MarkedSpan* scope = link_scope(cue, spans);
    if (scope) {
      for (int w = scope->begin; w < scope->end; ++w) inst.scope.insert(w);
    } else {
      warn(ctx, describe(s.source) + ": negation cue without a scope element");
    }
    inst.scope_includes_cue = ctx.scope_includes_cue;
    bool any_cue_word_in_scope = false;
    for (const CuePart& p : inst.cue.parts)
      any_cue_word_in_scope |= inst.scope.count(p.word_index) > 0;
    if (any_cue_word_in_scope && !inst.scope_includes_cue) {
      warn(ctx, describe(s.source) + ": cue sits inside its scope, recording that");
      inst.scope_includes_cue = true;
    }
    s.instances.push_back(std::move(inst));
  }
  validate(s);
  return s;
}

void collect_bioscope(const xml::Node& node, const std::string& doc_id, int& doc_counter,
                      std::map<std::string, int>* sent_counters, const std::string& corpus_name,
                      std::vector<std::string>* warnings, std::vector<Sentence>& out) {
  std::string current_doc = doc_id;
  if (xml::name_is(node, "document")) {
    current_doc = "d" + std::to_string(doc_counter++);
    for (const xml::Node& child : node.children) {
      if (xml::name_is(child, "docid")) {
        std::string text;
        for (const xml::Node& t : child.children) {
          if (t.kind == xml::Node::Kind::kText) text += t.text;
        }
        size_t a = text.find_first_not_of(" \t\r\n");
        size_t b = text.find_last_not_of(" \t\r\n");
        if (a != std::string::npos) current_doc = text.substr(a, b - a + 1);
        break;
      }
    }
  }
  if (xml::name_is(node, "sentence")) {
    SentenceContext ctx;
    ctx.corpus = corpus_name;
    ctx.document = current_doc;
    ctx.sentence_number = (*sent_counters)[current_doc]++;
    ctx.scope_includes_cue = true;
    ctx.warnings = warnings;
    if (auto s = parse_sentence_element(node, ctx)) out.push_back(std::move(*s));
    return;
  }
  for (const xml::Node& child : node.children) {
    if (child.kind == xml::Node::Kind::kElement)
      collect_bioscope(child, current_doc, doc_counter, sent_counters, corpus_name, warnings, out);
  }
}

void collect_sfu(const xml::Node& node, const std::string& doc_id, int& sent_counter,
                 const std::string& corpus_name, std::vector<std::string>* warnings,
                 std::vector<Sentence>& out) {
  if (xml::name_is(node, "sentence")) {
    SentenceContext ctx;
    ctx.corpus = corpus_name;
    ctx.document = doc_id;
    ctx.sentence_number = sent_counter++;
    ctx.scope_includes_cue = false;
    ctx.warnings = warnings;
    if (auto s = parse_sentence_element(node, ctx)) out.push_back(std::move(*s));
    return;
  }
  for (const xml::Node& child : node.children) {
    if (child.kind == xml::Node::Kind::kElement)
      collect_sfu(child, doc_id, sent_counter, corpus_name, warnings, out);
  }
}

}  // namespace

std::vector<Sentence> parse_bioscope(std::istream& in, const std::string& corpus_name,
                                     std::vector<std::string>* warnings) {
  xml::Node root = xml::parse_document(in);
  std::vector<Sentence> out;
  int doc_counter = 0;
  std::map<std::string, int> sent_counters;
  collect_bioscope(root, "d?", doc_counter, &sent_counters, corpus_name, warnings, out);
  return out;
}

std::vector<Sentence> parse_sfu(std::istream& in, const std::string& document_id,
                                const std::string& corpus_name,
                                std::vector<std::string>* warnings) {
  xml::Node root = xml::parse_document(in);
  std::vector<Sentence> out;
  int sent_counter = 0;
  collect_sfu(root, document_id, sent_counter, corpus_name, warnings, out);
  return out;
}

}  // namespace negscope
