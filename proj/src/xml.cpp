#include "negscope/xml.hpp"

#include <cctype>
#include <istream>
#include <sstream>

#include "negscope/errors.hpp"

namespace negscope::xml {

namespace {

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool iequals(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (lower(a[i]) != lower(b[i])) return false;
  }
  return true;
}

struct Cursor {
  const std::string& s;
  size_t pos = 0;

  bool done() const { return pos >= s.size(); }
  char peek() const { return s[pos]; }
  bool starts_with(const char* p) const { return s.compare(pos, std::char_traits<char>::length(p), p) == 0; }

  int line() const {
    int n = 1;
    for (size_t i = 0; i < pos && i < s.size(); ++i) {
      if (s[i] == '\n') ++n;
    }
    return n;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("xml line " + std::to_string(line()) + ": " + msg);
  }

  void expect(char c) {
    if (done() || s[pos] != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }

  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  void skip_until(const char* marker) {
    size_t at = s.find(marker, pos);
    if (at == std::string::npos) fail(std::string("unterminated section, missing '") + marker + "'");
    pos = at + std::char_traits<char>::length(marker);
  }
};

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' || c == '.';
}

std::string read_name(Cursor& c) {
  size_t start = c.pos;
  while (!c.done() && is_name_char(c.peek())) ++c.pos;
  if (c.pos == start) c.fail("expected a name");
  return c.s.substr(start, c.pos - start);
}

std::string decode_entities(Cursor& base, const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != '&') {
      out.push_back(raw[i]);
      continue;
    }
    size_t semi = raw.find(';', i);
    if (semi == std::string::npos || semi - i > 10) {
      out.push_back('&');  // stray ampersand, keep it
      continue;
    }
    std::string name = raw.substr(i + 1, semi - i - 1);
    if (name == "lt") out.push_back('<');
    else if (name == "gt") out.push_back('>');
    else if (name == "amp") out.push_back('&');
    else if (name == "quot") out.push_back('"');
    else if (name == "apos") out.push_back('\'');
    else if (!name.empty() && name[0] == '#') {
      try {
        long code = (name.size() > 1 && (name[1] == 'x' || name[1] == 'X'))
                        ? std::stol(name.substr(2), nullptr, 16)
                        : std::stol(name.substr(1));
        if (code < 0x80) {
          out.push_back(static_cast<char>(code));
        } else if (code < 0x800) {
          out.push_back(static_cast<char>(0xC0 | (code >> 6)));
          out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        } else {
          out.push_back(static_cast<char>(0xE0 | (code >> 12)));
          out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
          out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        }
      } catch (const std::exception&) {
        base.fail("bad character reference '&" + name + ";'");
      }
    } else {
      // Unknown named entity; keep it verbatim.
      out.append(raw, i, semi - i + 1);
    }
    i = semi;
  }
  return out;
}

void parse_attrs(Cursor& c, Node& node) {
  while (true) {
    c.skip_ws();
    if (c.done()) c.fail("unterminated tag");
    if (c.peek() == '>' || c.peek() == '/' || c.peek() == '?') return;
    std::string key = read_name(c);
    c.skip_ws();
    c.expect('=');
    c.skip_ws();
    if (c.done() || (c.peek() != '"' && c.peek() != '\'')) c.fail("attribute value must be quoted");
    char quote = c.peek();
    ++c.pos;
    size_t start = c.pos;
    size_t end = c.s.find(quote, start);
    if (end == std::string::npos) c.fail("unterminated attribute value");
    c.pos = end + 1;
    node.attrs.emplace_back(key, decode_entities(c, c.s.substr(start, end - start)));
  }
}

void parse_nodes(Cursor& c, std::vector<Node>& out);

// Parses one element, cursor positioned just past '<'.
Node parse_element(Cursor& c) {
  Node node;
  node.kind = Node::Kind::kElement;
  node.name = read_name(c);
  parse_attrs(c, node);
  if (c.starts_with("/>")) {
    c.pos += 2;
    return node;
  }
  c.expect('>');
  parse_nodes(c, node.children);
  if (!c.starts_with("</")) c.fail("missing close tag for <" + node.name + ">");
  c.pos += 2;
  std::string closing = read_name(c);
  if (!iequals(closing, node.name))
    c.fail("expected </" + node.name + ">, found </" + closing + ">");
  c.skip_ws();
  c.expect('>');
  return node;
}

void parse_nodes(Cursor& c, std::vector<Node>& out) {
  while (!c.done()) {
    if (c.peek() == '<') {
      if (c.starts_with("</")) return;
      if (c.starts_with("<!--")) {
        c.pos += 4;
        c.skip_until("-->");
        continue;
      }
      if (c.starts_with("<![CDATA[")) {
        c.pos += 9;
        size_t end = c.s.find("]]>", c.pos);
        if (end == std::string::npos) c.fail("unterminated CDATA section");
        Node t;
        t.kind = Node::Kind::kText;
        t.text = c.s.substr(c.pos, end - c.pos);
        out.push_back(std::move(t));
        c.pos = end + 3;
        continue;
      }
      if (c.starts_with("<?")) {
        c.pos += 2;
        c.skip_until("?>");
        continue;
      }
      if (c.starts_with("<!")) {
        // DOCTYPE and friends; skip, honoring an internal subset.
        c.pos += 2;
        while (!c.done() && c.peek() != '>' && c.peek() != '[') ++c.pos;
        if (!c.done() && c.peek() == '[') {
          c.skip_until("]");
          while (!c.done() && c.peek() != '>') ++c.pos;
        }
        if (c.done()) c.fail("unterminated declaration");
        ++c.pos;
        continue;
      }
      ++c.pos;
      out.push_back(parse_element(c));
      continue;
    }
    size_t start = c.pos;
    while (!c.done() && c.peek() != '<') ++c.pos;
    std::string raw = c.s.substr(start, c.pos - start);
    Node t;
    t.kind = Node::Kind::kText;
    t.text = decode_entities(c, raw);
    if (t.text.find_first_not_of(" \t\r\n") != std::string::npos || !out.empty())
      out.push_back(std::move(t));
  }
}

}  // namespace

const std::string* Node::attr(const std::string& key) const {
  for (const auto& a : attrs) {
    if (iequals(a.first, key)) return &a.second;
  }
  return nullptr;
}

bool name_is(const Node& n, const char* lower_name) {
  if (n.kind != Node::Kind::kElement) return false;
  return iequals(n.name, lower_name);
}

Node parse_document(const std::string& content) {
  Cursor c{content};
  Node root;
  root.kind = Node::Kind::kElement;
  root.name = "#root";
  parse_nodes(c, root.children);
  if (!c.done()) c.fail("stray close tag at top level");
  bool has_element = false;
  for (const Node& n : root.children) has_element |= n.kind == Node::Kind::kElement;
  if (!has_element) throw ParseError("xml: document has no root element");
  return root;
}

Node parse_document(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

}  // namespace negscope::xml
