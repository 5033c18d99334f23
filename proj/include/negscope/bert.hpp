#pragma once

#include <memory>

#include "negscope/tagger.hpp"

namespace negscope {

struct TransformerConfig {
  int vocab_size = 0;
  int hidden_size = 0;
  int num_layers = 0;
  int num_heads = 0;
  int intermediate_size = 0;
  int max_position = 512;
  int type_vocab_size = 2;
  float layer_norm_eps = 1e-12f;
  bool lower_case = true;
};

// Frozen pre-trained transformer encoder (multi-head self-attention with
// GELU feed-forward blocks), run forward-only on CPU. Loads a directory
// holding config.kv, vocab.txt and weights.nstf as produced by
// tools/export_encoder_weights.py. Heads are trained on top; the encoder
// itself is not updated.
class BertEncoder : public EncoderBackend {
 public:
  static std::unique_ptr<BertEncoder> load(const std::string& dir);

  const std::string& name() const override { return name_; }
  int hidden_size() const override { return cfg_.hidden_size; }
  SubwordTokenizer& tokenizer() override { return *tok_; }
  const SubwordTokenizer& tokenizer() const override { return *tok_; }
  bool trainable() const override { return false; }

  void encode(const std::vector<const TokenizedExample*>& batch,
              std::vector<Eigen::MatrixXf>& hidden, bool train_mode) override;
  void save(const std::string& dir) const override;
  void describe_to(KvFile& manifest) const override;

  const TransformerConfig& config() const { return cfg_; }

 private:
  BertEncoder() = default;

  struct Layer {
    Eigen::MatrixXf wq, wk, wv, wo;      // hidden x hidden, stored [out, in]
    Eigen::VectorXf bq, bk, bv, bo;
    Eigen::VectorXf ln1_g, ln1_b;
    Eigen::MatrixXf wi;                  // intermediate x hidden
    Eigen::VectorXf bi;
    Eigen::MatrixXf wf;                  // hidden x intermediate
    Eigen::VectorXf bf;
    Eigen::VectorXf ln2_g, ln2_b;
  };

  std::string name_ = "pretrained-base-uncased";
  std::string source_dir_;
  TransformerConfig cfg_;
  std::unique_ptr<WordPieceTokenizer> tok_;
  Eigen::MatrixXf word_emb_, pos_emb_, type_emb_;
  Eigen::VectorXf ln_emb_g_, ln_emb_b_;
  std::vector<Layer> layers_;
};

}  // namespace negscope
