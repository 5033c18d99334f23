#include "negscope/bert.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "negscope/errors.hpp"
#include "negscope/tensors.hpp"

namespace negscope {

namespace fs = std::filesystem;

namespace {

void layer_norm_rows(Eigen::MatrixXf& x, const Eigen::VectorXf& gamma,
                     const Eigen::VectorXf& beta, float eps) {
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const float mean = x.row(r).mean();
    const float var = (x.row(r).array() - mean).square().mean();
    const float inv = 1.0f / std::sqrt(var + eps);
    x.row(r) = (((x.row(r).array() - mean) * inv) * gamma.transpose().array() +
                beta.transpose().array())
                   .matrix();
  }
}

void gelu_inplace(Eigen::MatrixXf& x) {
  constexpr float kInvSqrt2 = 0.70710678118654752f;
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      const float v = x(r, c);
      x(r, c) = 0.5f * v * (1.0f + std::erf(v * kInvSqrt2));
    }
  }
}

void softmax_rows_masked(Eigen::MatrixXf& scores, const std::vector<uint8_t>& mask) {
  constexpr float kNegInf = -1e9f;
  for (Eigen::Index r = 0; r < scores.rows(); ++r) {
    for (Eigen::Index c = 0; c < scores.cols(); ++c) {
      if (!mask[static_cast<size_t>(c)]) scores(r, c) = kNegInf;
    }
    const float mx = scores.row(r).maxCoeff();
    scores.row(r) = (scores.row(r).array() - mx).exp();
    scores.row(r) /= scores.row(r).sum();
  }
}

}  // namespace

std::unique_ptr<BertEncoder> BertEncoder::load(const std::string& dir) {
  const fs::path base(dir);
  std::vector<std::string> missing;
  for (const char* f : {"config.kv", "vocab.txt", "weights.nstf"}) {
    if (!fs::exists(base / f)) missing.push_back(f);
  }
  if (!missing.empty()) {
    std::string list;
    for (const std::string& f : missing) list += (list.empty() ? "" : ", ") + f;
    throw ConfigError("pretrained backend directory '" + dir + "' lacks: " + list);
  }

  auto enc = std::unique_ptr<BertEncoder>(new BertEncoder());
  enc->source_dir_ = dir;
  KvFile cfg = KvFile::load((base / "config.kv").string());
  enc->cfg_.vocab_size = static_cast<int>(cfg.get_int("vocab_size"));
  enc->cfg_.hidden_size = static_cast<int>(cfg.get_int("hidden_size"));
  enc->cfg_.num_layers = static_cast<int>(cfg.get_int("num_layers"));
  enc->cfg_.num_heads = static_cast<int>(cfg.get_int("num_heads"));
  enc->cfg_.intermediate_size = static_cast<int>(cfg.get_int("intermediate_size"));
  enc->cfg_.max_position = static_cast<int>(cfg.get_int_or("max_position", 512));
  enc->cfg_.type_vocab_size = static_cast<int>(cfg.get_int_or("type_vocab_size", 2));
  if (cfg.has("layer_norm_eps"))
    enc->cfg_.layer_norm_eps = static_cast<float>(cfg.get_double("layer_norm_eps"));
  if (cfg.has("lower_case")) enc->cfg_.lower_case = cfg.get_bool("lower_case");
  if (enc->cfg_.hidden_size <= 0 || enc->cfg_.num_heads <= 0 ||
      enc->cfg_.hidden_size % enc->cfg_.num_heads != 0)
    throw ConfigError("'" + dir + "': hidden_size must be a positive multiple of num_heads");

  enc->tok_ = std::make_unique<WordPieceTokenizer>(
      WordPieceTokenizer::from_file((base / "vocab.txt").string(), enc->cfg_.lower_case));
  if (fs::exists(base / "specials.txt")) {
    std::ifstream sp(base / "specials.txt");
    std::string word;
    while (std::getline(sp, word)) {
      if (!word.empty()) enc->tok_->register_special(word);
    }
  }

  const std::string wfile = (base / "weights.nstf").string();
  auto tensors = read_tensors(wfile);
  auto mat = [&](const std::string& name) { return to_matrix(require_tensor(tensors, name, wfile)); };
  auto vec = [&](const std::string& name) { return to_vector(require_tensor(tensors, name, wfile)); };

  enc->word_emb_ = mat("embeddings.word_embeddings.weight");
  enc->pos_emb_ = mat("embeddings.position_embeddings.weight");
  enc->type_emb_ = mat("embeddings.token_type_embeddings.weight");
  enc->ln_emb_g_ = vec("embeddings.LayerNorm.weight");
  enc->ln_emb_b_ = vec("embeddings.LayerNorm.bias");
  if (enc->word_emb_.rows() != enc->cfg_.vocab_size ||
      enc->word_emb_.cols() != enc->cfg_.hidden_size)
    throw ShapeError("'" + wfile + "': word embedding shape disagrees with config.kv");

  for (int l = 0; l < enc->cfg_.num_layers; ++l) {
    const std::string p = "encoder.layer." + std::to_string(l) + ".";
    Layer layer;
    layer.wq = mat(p + "attention.self.query.weight");
    layer.bq = vec(p + "attention.self.query.bias");
    layer.wk = mat(p + "attention.self.key.weight");
    layer.bk = vec(p + "attention.self.key.bias");
    layer.wv = mat(p + "attention.self.value.weight");
    layer.bv = vec(p + "attention.self.value.bias");
    layer.wo = mat(p + "attention.output.dense.weight");
    layer.bo = vec(p + "attention.output.dense.bias");
    layer.ln1_g = vec(p + "attention.output.LayerNorm.weight");
    layer.ln1_b = vec(p + "attention.output.LayerNorm.bias");
    layer.wi = mat(p + "intermediate.dense.weight");
    layer.bi = vec(p + "intermediate.dense.bias");
    layer.wf = mat(p + "output.dense.weight");
    layer.bf = vec(p + "output.dense.bias");
    layer.ln2_g = vec(p + "output.LayerNorm.weight");
    layer.ln2_b = vec(p + "output.LayerNorm.bias");
    enc->layers_.push_back(std::move(layer));
  }
  return enc;
}

void BertEncoder::encode(const std::vector<const TokenizedExample*>& batch,
                         std::vector<Eigen::MatrixXf>& hidden, bool /*train_mode*/) {
  hidden.assign(batch.size(), Eigen::MatrixXf());
  const int H = cfg_.hidden_size;
  const int heads = cfg_.num_heads;
  const int dh = H / heads;
  const float scale = 1.0f / std::sqrt(static_cast<float>(dh));

  for (size_t b = 0; b < batch.size(); ++b) {
    const TokenizedExample& ex = *batch[b];
    const int L = ex.max_len;
    if (L > cfg_.max_position)
      throw ShapeError(describe(ex.source) + ": max_len " + std::to_string(L) +
                       " exceeds the encoder position table (" +
                       std::to_string(cfg_.max_position) + ")");
    Eigen::MatrixXf x(L, H);
    for (int t = 0; t < L; ++t) {
      const int id = ex.token_ids[static_cast<size_t>(t)];
      if (id < 0 || id >= word_emb_.rows())
        throw DataError(describe(ex.source) + ": token id " + std::to_string(id) +
                        " outside the embedding table (vocab " +
                        std::to_string(word_emb_.rows()) + ")");
      x.row(t) = word_emb_.row(id) + pos_emb_.row(t) + type_emb_.row(0);
    }
    layer_norm_rows(x, ln_emb_g_, ln_emb_b_, cfg_.layer_norm_eps);

    for (const Layer& layer : layers_) {
      Eigen::MatrixXf q = x * layer.wq.transpose();
      q.rowwise() += layer.bq.transpose();
      Eigen::MatrixXf k = x * layer.wk.transpose();
      k.rowwise() += layer.bk.transpose();
      Eigen::MatrixXf v = x * layer.wv.transpose();
      v.rowwise() += layer.bv.transpose();

      Eigen::MatrixXf context(L, H);
      for (int h = 0; h < heads; ++h) {
        const auto qh = q.middleCols(h * dh, dh);
        const auto kh = k.middleCols(h * dh, dh);
        const auto vh = v.middleCols(h * dh, dh);
        Eigen::MatrixXf scores = (qh * kh.transpose()) * scale;
        softmax_rows_masked(scores, ex.attention_mask);
        context.middleCols(h * dh, dh) = scores * vh;
      }
      Eigen::MatrixXf attn = context * layer.wo.transpose();
      attn.rowwise() += layer.bo.transpose();
      x += attn;
      layer_norm_rows(x, layer.ln1_g, layer.ln1_b, cfg_.layer_norm_eps);

      Eigen::MatrixXf inter = x * layer.wi.transpose();
      inter.rowwise() += layer.bi.transpose();
      gelu_inplace(inter);
      Eigen::MatrixXf ff = inter * layer.wf.transpose();
      ff.rowwise() += layer.bf.transpose();
      x += ff;
      layer_norm_rows(x, layer.ln2_g, layer.ln2_b, cfg_.layer_norm_eps);
    }
    hidden[b] = std::move(x);
  }
}

void BertEncoder::save(const std::string& dir) const {
  fs::create_directories(dir);
  const fs::path src(source_dir_), dst(dir);
  for (const char* f : {"config.kv", "vocab.txt", "weights.nstf"}) {
    if (fs::exists(dst / f) && fs::equivalent(src / f, dst / f)) continue;
    fs::copy_file(src / f, dst / f, fs::copy_options::overwrite_existing);
  }
  std::ofstream specials((dst / "specials.txt").string());
  for (const std::string& s : tok_->specials()) specials << s << "\n";
}

void BertEncoder::describe_to(KvFile& manifest) const {
  manifest.set("backend", name_);
  manifest.set("backend_hidden", static_cast<long long>(cfg_.hidden_size));
}

}  // namespace negscope
