#include "negscope/tokenize.hpp"

#include <cctype>
#include <fstream>
#include <istream>

#include "negscope/errors.hpp"

namespace negscope {

namespace {

constexpr size_t kMaxCharsPerWord = 100;

bool is_ascii_punct(unsigned char c) { return std::ispunct(c) != 0; }

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Matches [unusedN] vocabulary rows.
bool looks_like_unused(const std::string& token) {
  if (token.size() < 9) return false;
  if (token.compare(0, 7, "[unused") != 0 || token.back() != ']') return false;
  for (size_t i = 7; i + 1 < token.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(token[i]))) return false;
  }
  return true;
}

}  // namespace

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

WordPieceTokenizer::WordPieceTokenizer(std::istream& vocab, bool lower_case) : lower_(lower_case) {
  std::string line;
  while (std::getline(vocab, line)) {
    std::string token = trim(line);
    if (token.empty()) continue;
    if (index_.count(token)) continue;
    index_[token] = static_cast<int>(vocab_.size());
    vocab_.push_back(token);
  }
  if (vocab_.empty()) throw ConfigError("wordpiece vocabulary is empty");
  auto need = [&](const char* tok) {
    auto it = index_.find(tok);
    if (it == index_.end())
      throw ConfigError(std::string("wordpiece vocabulary lacks required token ") + tok);
    return it->second;
  };
  pad_id_ = need("[PAD]");
  unk_id_ = need("[UNK]");
  for (size_t i = 0; i < vocab_.size(); ++i) {
    if (looks_like_unused(vocab_[i])) unused_pool_.push_back(static_cast<int>(i));
  }
}

WordPieceTokenizer WordPieceTokenizer::from_file(const std::string& path, bool lower_case) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read vocabulary file '" + path + "'");
  return WordPieceTokenizer(in, lower_case);
}

int WordPieceTokenizer::register_special(const std::string& word) {
  auto it = special_ids_.find(word);
  if (it != special_ids_.end()) return it->second;
  int id;
  if (next_unused_ < unused_pool_.size()) {
    id = unused_pool_[next_unused_++];
  } else {
    id = static_cast<int>(vocab_.size());
    vocab_.push_back(word);
    index_[word] = id;
  }
  special_ids_[word] = id;
  special_order_.push_back(word);
  return id;
}

std::vector<std::string> WordPieceTokenizer::wordpiece(const std::string& piece) const {
  if (piece.size() > kMaxCharsPerWord) return {"[UNK]"};
  std::vector<std::string> out;
  size_t start = 0;
  while (start < piece.size()) {
    size_t end = piece.size();
    std::string current;
    bool found = false;
    while (start < end) {
      std::string sub = piece.substr(start, end - start);
      if (start > 0) sub = "##" + sub;
      if (index_.count(sub)) {
        current = sub;
        found = true;
        break;
      }
      --end;
    }
    if (!found) return {"[UNK]"};
    out.push_back(current);
    start = end;
  }
  return out;
}

std::vector<std::string> WordPieceTokenizer::subwords(const std::string& word) const {
  if (special_ids_.count(word)) return {word};

  // Basic cleanup: drop control chars, lower-case, split at punctuation.
  std::vector<std::string> pieces;
  std::string current;
  for (unsigned char c : word) {
    if (c < 0x20 || c == 0x7f) continue;
    char ch = static_cast<char>(c);
    if (c < 0x80 && is_ascii_punct(c)) {
      if (!current.empty()) pieces.push_back(current);
      pieces.push_back(std::string(1, ch));
      current.clear();
      continue;
    }
    if (lower_ && c < 0x80) ch = static_cast<char>(std::tolower(c));
    current.push_back(ch);
  }
  if (!current.empty()) pieces.push_back(current);

  std::vector<std::string> out;
  for (const std::string& piece : pieces) {
    for (std::string& tok : wordpiece(piece)) out.push_back(std::move(tok));
  }
  if (out.empty()) out.push_back("[UNK]");
  return out;
}

int WordPieceTokenizer::token_id(const std::string& token) const {
  auto sp = special_ids_.find(token);
  if (sp != special_ids_.end()) return sp->second;
  auto it = index_.find(token);
  return it == index_.end() ? unk_id_ : it->second;
}

WhitespaceHashTokenizer::WhitespaceHashTokenizer(int vocab_size) : vocab_size_(vocab_size) {
  if (vocab_size_ < kHashBase + 16)
    throw ConfigError("hash tokenizer vocabulary too small: " + std::to_string(vocab_size));
}

std::vector<std::string> WhitespaceHashTokenizer::subwords(const std::string& word) const {
  return {word};
}

int WhitespaceHashTokenizer::token_id(const std::string& token) const {
  auto it = special_ids_.find(token);
  if (it != special_ids_.end()) return it->second;
  return kHashBase + static_cast<int>(fnv1a64(token) %
                                      static_cast<uint64_t>(vocab_size_ - kHashBase));
}

int WhitespaceHashTokenizer::register_special(const std::string& word) {
  auto it = special_ids_.find(word);
  if (it != special_ids_.end()) return it->second;
  int id = kSpecialBase + static_cast<int>(special_order_.size());
  if (id >= kHashBase) throw ConfigError("too many special tokens");
  special_ids_[word] = id;
  special_order_.push_back(word);
  return id;
}

}  // namespace negscope
