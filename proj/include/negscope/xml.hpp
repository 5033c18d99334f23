#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace negscope::xml {

// Minimal DOM for the annotated-corpus XML dialects: elements, attributes,
// text, comments/PIs/doctype (skipped), CDATA, and the standard entities.
struct Node {
  enum class Kind { kElement, kText };

  Kind kind = Kind::kElement;
  std::string name;  // element name, original case
  std::vector<std::pair<std::string, std::string>> attrs;
  std::string text;  // text nodes only
  std::vector<Node> children;

  // Case-insensitive attribute lookup; nullptr when absent.
  const std::string* attr(const std::string& key) const;
};

bool name_is(const Node& n, const char* lower_name);

// Parses a whole document and returns a synthetic element named "#root"
// holding the top-level nodes. Throws ParseError with a line number on
// malformed markup.
Node parse_document(const std::string& content);
Node parse_document(std::istream& in);

}  // namespace negscope::xml
