#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "negscope/encoding.hpp"
#include "negscope/kv.hpp"
#include "negscope/tokenize.hpp"

namespace negscope {

struct ParamRef {
  std::string name;
  Eigen::MatrixXf* value = nullptr;
  Eigen::MatrixXf* grad = nullptr;
};

// Turns padded token-id sequences into per-token feature vectors of a fixed
// width. Trainable backends cache activations during a train-mode encode and
// expose parameters for the optimizer.
class EncoderBackend {
 public:
  virtual ~EncoderBackend() = default;

  virtual const std::string& name() const = 0;
  virtual int hidden_size() const = 0;
  virtual SubwordTokenizer& tokenizer() = 0;
  virtual const SubwordTokenizer& tokenizer() const = 0;
  virtual bool trainable() const = 0;

  // hidden[b] gets shape (max_len x hidden_size).
  virtual void encode(const std::vector<const TokenizedExample*>& batch,
                      std::vector<Eigen::MatrixXf>& hidden, bool train_mode) = 0;
  // d_hidden matches the shapes produced by the preceding train-mode encode.
  virtual void backward(const std::vector<const TokenizedExample*>& batch,
                        const std::vector<Eigen::MatrixXf>& d_hidden);
  virtual std::vector<ParamRef> parameters();
  virtual void save(const std::string& dir) const = 0;
  // Manifest keys needed to reconstruct this backend from a checkpoint.
  virtual void describe_to(KvFile& manifest) const = 0;
};

struct BackendSpec {
  std::string kind;    // "test-small" or "pretrained-base-uncased"
  std::string dir;     // checkpoint/weights directory, when applicable
  int hidden = 32;     // test-small
  int vocab = 4096;    // test-small
  uint64_t seed = 1;   // test-small initialization
};

// "test-small", "test-small,hidden=64,vocab=2048,seed=7",
// "pretrained-base-uncased,dir=/path/to/weights"
BackendSpec parse_backend_spec(const std::string& text);

// Builds a backend; loads weights/tokenizer state from spec.dir when that
// directory holds them. Unknown kinds and missing files raise ConfigError.
std::unique_ptr<EncoderBackend> make_backend(const BackendSpec& spec);

class AdamOptimizer {
 public:
  AdamOptimizer(std::vector<ParamRef> params, double learning_rate, double beta1 = 0.9,
                double beta2 = 0.999, double epsilon = 1e-8);
  void zero_grad();
  void step();

 private:
  std::vector<ParamRef> params_;
  std::vector<Eigen::MatrixXf> m_, v_;
  double lr_, beta1_, beta2_, eps_;
  long long t_ = 0;
};

// Linear softmax head over a backend's features, one of the two pipeline
// stages depending on `task`.
class TaggerModel {
 public:
  TaggerModel(std::shared_ptr<EncoderBackend> backend, Task task, int max_len, uint64_t seed);

  Task task() const { return task_; }
  int n_classes() const { return n_classes_; }
  int max_len() const { return max_len_; }
  EncoderBackend& backend() { return *backend_; }
  const EncoderBackend& backend() const { return *backend_; }
  std::shared_ptr<EncoderBackend> backend_ptr() { return backend_; }

  // Softmax distributions for every token position, padding included:
  // out[example][position][class]. Deterministic for fixed weights.
  std::vector<std::vector<std::vector<float>>> predict_distributions(
      const std::vector<TokenizedExample>& examples, int batch_size = 32);

  // Weighted cross entropy of one batch under current weights (no update).
  double training_loss(const std::vector<TokenizedExample>& batch,
                       const ClassWeights& weights) const;

  // Forward and backward over one batch without an optimizer step: adds to
  // the head (and trainable backend) gradients and returns the same
  // normalized loss as training_loss.
  double accumulate_gradients(const std::vector<TokenizedExample>& batch,
                              const ClassWeights& weights);

  std::vector<ParamRef> parameters();

  // Writes head weights, backend weights, tokenizer state, and a manifest
  // into `dir`; extra entries are merged into the manifest.
  void save(const std::string& dir, const KvFile* extra = nullptr) const;
  static TaggerModel load(const std::string& dir);
  static KvFile read_manifest(const std::string& dir);

  Eigen::MatrixXf head_w;  // hidden x classes
  Eigen::MatrixXf head_b;  // 1 x classes
  Eigen::MatrixXf g_head_w;
  Eigen::MatrixXf g_head_b;

 private:
  std::shared_ptr<EncoderBackend> backend_;
  Task task_;
  int n_classes_;
  int max_len_;
};

struct TrainConfig {
  double learning_rate = 3e-5;
  int patience_epochs = 6;
  int max_epochs = 60;
  int batch_size = 32;
  uint64_t seed = 13;
  ClassWeights weights;  // defaults to class_weights(task) when empty
};

struct EpochStats {
  double train_loss = 0;
  double dev_f1 = 0;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  int best_epoch = 0;  // 1-based
  bool stopped_early = false;
};

// Early-stopping bookkeeping: strict improvement resets the counter; returns
// true when `patience` consecutive epochs brought no improvement.
struct EarlyStopState {
  double best = -1.0;
  int best_epoch = 0;
  int epochs_without_improvement = 0;
};

bool early_stop_update(EarlyStopState& state, int epoch, double dev_metric, int patience);

// Mini-batch Adam training with dev-F1 early stopping; the model is left at
// the weights of the best epoch. Dev metric: token-level F1 with the task's
// positive classes pooled, over real token positions.
TrainHistory train(TaggerModel& model, const std::vector<TokenizedExample>& train_set,
                   const std::vector<TokenizedExample>& dev_set, const TrainConfig& config);

// Pooled positive-class token F1 / plain token accuracy over real positions.
double dev_token_f1(TaggerModel& model, const std::vector<TokenizedExample>& examples);
double token_accuracy(TaggerModel& model, const std::vector<TokenizedExample>& examples);

void write_history_csv(const TrainHistory& history, std::ostream& out);

}  // namespace negscope
