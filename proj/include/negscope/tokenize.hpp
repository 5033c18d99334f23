#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace negscope {

// Splits corpus words into model sub-tokens and maps tokens to ids.
class SubwordTokenizer {
 public:
  virtual ~SubwordTokenizer() = default;

  // Sub-token strings for one corpus word; never empty.
  virtual std::vector<std::string> subwords(const std::string& word) const = 0;
  virtual int token_id(const std::string& token) const = 0;
  virtual int pad_id() const = 0;
  virtual int vocab_size() const = 0;

  // Registers an atomic word that subwords() must return unsplit, and gives
  // it a stable id. Idempotent; returns the id.
  virtual int register_special(const std::string& word) = 0;
  // Registered specials in registration order.
  virtual std::vector<std::string> specials() const = 0;
};

// Greedy longest-match-first sub-word tokenizer over a fixed vocabulary with
// "##" continuation pieces and an [UNK] fallback. Words are lower-cased when
// `lower_case` is set and split at punctuation before matching. Specials bind
// to [unusedN] vocabulary rows when available, else extend the vocabulary.
class WordPieceTokenizer : public SubwordTokenizer {
 public:
  WordPieceTokenizer(std::istream& vocab, bool lower_case = true);
  static WordPieceTokenizer from_file(const std::string& path, bool lower_case = true);

  std::vector<std::string> subwords(const std::string& word) const override;
  int token_id(const std::string& token) const override;
  int pad_id() const override { return pad_id_; }
  int unk_id() const { return unk_id_; }
  int vocab_size() const override { return static_cast<int>(vocab_.size()); }
  int register_special(const std::string& word) override;
  std::vector<std::string> specials() const override { return special_order_; }
  bool lower_case() const { return lower_; }

 private:
  std::vector<std::string> wordpiece(const std::string& piece) const;

  std::vector<std::string> vocab_;
  std::unordered_map<std::string, int> index_;
  std::unordered_map<std::string, int> special_ids_;
  std::vector<std::string> special_order_;
  std::vector<int> unused_pool_;
  size_t next_unused_ = 0;
  bool lower_ = true;
  int pad_id_ = 0;
  int unk_id_ = 0;
};

// Whole-word tokenizer with hashed ids, for the small trainable backend.
// Id 0 is padding, ids 1..15 are reserved for registered specials, the rest
// of the table is filled by a stable 64-bit hash of the word.
class WhitespaceHashTokenizer : public SubwordTokenizer {
 public:
  explicit WhitespaceHashTokenizer(int vocab_size = 4096);

  std::vector<std::string> subwords(const std::string& word) const override;
  int token_id(const std::string& token) const override;
  int pad_id() const override { return 0; }
  int vocab_size() const override { return vocab_size_; }
  int register_special(const std::string& word) override;
  std::vector<std::string> specials() const override { return special_order_; }

 private:
  static constexpr int kSpecialBase = 1;
  static constexpr int kHashBase = 16;
  int vocab_size_;
  std::unordered_map<std::string, int> special_ids_;
  std::vector<std::string> special_order_;
};

uint64_t fnv1a64(const std::string& s);

}  // namespace negscope
