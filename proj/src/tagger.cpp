#include "negscope/tagger.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "negscope/bert.hpp"
#include "negscope/errors.hpp"
#include "negscope/rng.hpp"
#include "negscope/tensors.hpp"
#include "negscope/test_backend.hpp"

namespace negscope {

namespace fs = std::filesystem;

void EncoderBackend::backward(const std::vector<const TokenizedExample*>&,
                              const std::vector<Eigen::MatrixXf>&) {}

std::vector<ParamRef> EncoderBackend::parameters() { return {}; }

BackendSpec parse_backend_spec(const std::string& text) {
  BackendSpec spec;
  std::stringstream ss(text);
  std::string item;
  bool first = true;
  while (std::getline(ss, item, ',')) {
    if (first) {
      spec.kind = item;
      first = false;
      continue;
    }
    size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw ConfigError("backend option '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "dir") spec.dir = value;
      else if (key == "hidden") spec.hidden = std::stoi(value);
      else if (key == "vocab") spec.vocab = std::stoi(value);
      else if (key == "seed") spec.seed = std::stoull(value);
      else throw ConfigError("unknown backend option '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw ConfigError("bad value for backend option '" + key + "': '" + value + "'");
    }
  }
  if (spec.kind.empty()) throw ConfigError("empty backend spec");
  return spec;
}

std::unique_ptr<EncoderBackend> make_backend(const BackendSpec& spec) {
  if (spec.kind == "test-small") {
    if (!spec.dir.empty() && fs::exists(fs::path(spec.dir) / "backend.nstf"))
      return TestEncoder::load(spec.dir);
    return std::make_unique<TestEncoder>(spec.hidden, spec.vocab, spec.seed);
  }
  if (spec.kind == "pretrained-base-uncased") {
    if (spec.dir.empty())
      throw ConfigError("backend 'pretrained-base-uncased' needs dir=<weights directory>");
    return BertEncoder::load(spec.dir);
  }
  throw ConfigError("unknown backend '" + spec.kind + "'");
}

AdamOptimizer::AdamOptimizer(std::vector<ParamRef> params, double learning_rate, double beta1,
                             double beta2, double epsilon)
    : params_(std::move(params)), lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {
  for (const ParamRef& p : params_) {
    m_.emplace_back(Eigen::MatrixXf::Zero(p.value->rows(), p.value->cols()));
    v_.emplace_back(Eigen::MatrixXf::Zero(p.value->rows(), p.value->cols()));
  }
}

void AdamOptimizer::zero_grad() {
  for (ParamRef& p : params_) p.grad->setZero();
}

void AdamOptimizer::step() {
  ++t_;
  const float b1 = static_cast<float>(beta1_);
  const float b2 = static_cast<float>(beta2_);
  const float bias1 = 1.0f - std::pow(b1, static_cast<float>(t_));
  const float bias2 = 1.0f - std::pow(b2, static_cast<float>(t_));
  const float lr = static_cast<float>(lr_);
  const float eps = static_cast<float>(eps_);
  for (size_t i = 0; i < params_.size(); ++i) {
    Eigen::MatrixXf& g = *params_[i].grad;
    m_[i] = b1 * m_[i] + (1.0f - b1) * g;
    v_[i] = b2 * v_[i] + (1.0f - b2) * g.cwiseProduct(g);
    Eigen::MatrixXf m_hat = m_[i] / bias1;
    Eigen::MatrixXf v_hat = v_[i] / bias2;
    params_[i].value->noalias() -=
        lr * (m_hat.array() / (v_hat.array().sqrt() + eps)).matrix();
  }
}

TaggerModel::TaggerModel(std::shared_ptr<EncoderBackend> backend, Task task, int max_len,
                         uint64_t seed)
    : backend_(std::move(backend)), task_(task), n_classes_(negscope::n_classes(task)),
      max_len_(max_len) {
  if (!backend_) throw ArgumentError("TaggerModel needs a backend");
  if (max_len_ <= 0) throw ArgumentError("max_len must be positive");
  const int h = backend_->hidden_size();
  head_w.resize(h, n_classes_);
  head_b = Eigen::MatrixXf::Zero(1, n_classes_);
  Rng rng(seed);
  for (Eigen::Index r = 0; r < head_w.rows(); ++r) {
    for (Eigen::Index c = 0; c < head_w.cols(); ++c)
      head_w(r, c) = static_cast<float>(rng.normal() * 0.02);
  }
  g_head_w = Eigen::MatrixXf::Zero(h, n_classes_);
  g_head_b = Eigen::MatrixXf::Zero(1, n_classes_);
}

std::vector<ParamRef> TaggerModel::parameters() {
  std::vector<ParamRef> out;
  if (backend_->trainable()) {
    for (ParamRef p : backend_->parameters()) out.push_back(p);
  }
  out.push_back(ParamRef{"head.weight", &head_w, &g_head_w});
  out.push_back(ParamRef{"head.bias", &head_b, &g_head_b});
  return out;
}

namespace {

void softmax_rows(Eigen::MatrixXf& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const float mx = m.row(r).maxCoeff();
    m.row(r) = (m.row(r).array() - mx).exp();
    m.row(r) /= m.row(r).sum();
  }
}

void check_example(const TokenizedExample& ex, int max_len, int n_classes) {
  if (ex.max_len != max_len || static_cast<int>(ex.token_ids.size()) != max_len)
    throw ShapeError(describe(ex.source) + ": example length " + std::to_string(ex.max_len) +
                     " does not match model max_len " + std::to_string(max_len));
  for (int lbl : ex.token_labels) {
    if (lbl < 0 || lbl >= n_classes)
      throw DataError(describe(ex.source) + ": label " + std::to_string(lbl) +
                      " outside the " + std::to_string(n_classes) + "-class task");
  }
}

struct BatchResult {
  double loss_sum = 0;   // weighted cross entropy, unnormalized
  double weight_sum = 0;
};

// Forward + loss; when `grads` is set, accumulates head gradients and runs
// the backend backward pass. Gradients are normalized by the batch's total
// token weight.
BatchResult run_batch(TaggerModel& model, EncoderBackend& backend,
                      const std::vector<const TokenizedExample*>& batch,
                      const ClassWeights& weights, bool grads) {
  std::vector<Eigen::MatrixXf> hidden;
  backend.encode(batch, hidden, grads);

  BatchResult out;
  std::vector<Eigen::MatrixXf> probs(batch.size());
  for (size_t b = 0; b < batch.size(); ++b) {
    Eigen::MatrixXf logits = hidden[b] * model.head_w;
    logits.rowwise() += model.head_b.row(0);
    softmax_rows(logits);
    probs[b] = std::move(logits);
    const TokenizedExample& ex = *batch[b];
    for (int t = 0; t < ex.max_len; ++t) {
      if (!ex.attention_mask[static_cast<size_t>(t)]) continue;
      const int y = ex.token_labels[static_cast<size_t>(t)];
      const double w = weights[static_cast<size_t>(y)];
      if (w <= 0) continue;
      const double p = std::max(static_cast<double>(probs[b](t, y)), 1e-30);
      out.loss_sum += w * -std::log(p);
      out.weight_sum += w;
    }
  }
  if (!grads || out.weight_sum <= 0) return out;

  const float inv = static_cast<float>(1.0 / out.weight_sum);
  std::vector<Eigen::MatrixXf> d_hidden(batch.size());
  for (size_t b = 0; b < batch.size(); ++b) {
    const TokenizedExample& ex = *batch[b];
    Eigen::MatrixXf d_logits = Eigen::MatrixXf::Zero(ex.max_len, model.n_classes());
    for (int t = 0; t < ex.max_len; ++t) {
      if (!ex.attention_mask[static_cast<size_t>(t)]) continue;
      const int y = ex.token_labels[static_cast<size_t>(t)];
      const float w = weights[static_cast<size_t>(y)];
      if (w <= 0) continue;
      d_logits.row(t) = probs[b].row(t) * (w * inv);
      d_logits(t, y) -= w * inv;
    }
    model.g_head_w.noalias() += hidden[b].transpose() * d_logits;
    model.g_head_b.row(0) += d_logits.colwise().sum();
    d_hidden[b].noalias() = d_logits * model.head_w.transpose();
  }
  if (backend.trainable()) backend.backward(batch, d_hidden);
  return out;
}

std::vector<Eigen::MatrixXf> snapshot_params(const std::vector<ParamRef>& params) {
  std::vector<Eigen::MatrixXf> out;
  out.reserve(params.size());
  for (const ParamRef& p : params) out.push_back(*p.value);
  return out;
}

void restore_params(const std::vector<ParamRef>& params, const std::vector<Eigen::MatrixXf>& snap) {
  for (size_t i = 0; i < params.size(); ++i) *params[i].value = snap[i];
}

}  // namespace

std::vector<std::vector<std::vector<float>>> TaggerModel::predict_distributions(
    const std::vector<TokenizedExample>& examples, int batch_size) {
  if (batch_size <= 0) throw ArgumentError("batch_size must be positive");
  for (const TokenizedExample& ex : examples) check_example(ex, max_len_, n_classes_);

  std::vector<std::vector<std::vector<float>>> out(examples.size());
  for (size_t begin = 0; begin < examples.size(); begin += static_cast<size_t>(batch_size)) {
    const size_t end = std::min(examples.size(), begin + static_cast<size_t>(batch_size));
    std::vector<const TokenizedExample*> batch;
    for (size_t i = begin; i < end; ++i) batch.push_back(&examples[i]);
    std::vector<Eigen::MatrixXf> hidden;
    backend_->encode(batch, hidden, false);
    for (size_t b = 0; b < batch.size(); ++b) {
      Eigen::MatrixXf logits = hidden[b] * head_w;
      logits.rowwise() += head_b.row(0);
      softmax_rows(logits);
      auto& dst = out[begin + b];
      dst.resize(static_cast<size_t>(max_len_));
      for (int t = 0; t < max_len_; ++t) {
        dst[static_cast<size_t>(t)].resize(static_cast<size_t>(n_classes_));
        for (int c = 0; c < n_classes_; ++c) dst[static_cast<size_t>(t)][static_cast<size_t>(c)] = logits(t, c);
      }
    }
  }
  return out;
}

double TaggerModel::training_loss(const std::vector<TokenizedExample>& batch,
                                  const ClassWeights& weights) const {
  if (weights.size() != static_cast<size_t>(n_classes_))
    throw ArgumentError("class weight vector has wrong size");
  std::vector<const TokenizedExample*> ptrs;
  for (const TokenizedExample& ex : batch) {
    check_example(ex, max_len_, n_classes_);
    ptrs.push_back(&ex);
  }
  auto& self = const_cast<TaggerModel&>(*this);
  BatchResult r = run_batch(self, *backend_, ptrs, weights, false);
  return r.weight_sum > 0 ? r.loss_sum / r.weight_sum : 0.0;
}

double TaggerModel::accumulate_gradients(const std::vector<TokenizedExample>& batch,
                                         const ClassWeights& weights) {
  if (weights.size() != static_cast<size_t>(n_classes_))
    throw ArgumentError("class weight vector has wrong size");
  std::vector<const TokenizedExample*> ptrs;
  for (const TokenizedExample& ex : batch) {
    check_example(ex, max_len_, n_classes_);
    ptrs.push_back(&ex);
  }
  BatchResult r = run_batch(*this, *backend_, ptrs, weights, true);
  return r.weight_sum > 0 ? r.loss_sum / r.weight_sum : 0.0;
}

bool early_stop_update(EarlyStopState& state, int epoch, double dev_metric, int patience) {
  if (dev_metric > state.best) {
    state.best = dev_metric;
    state.best_epoch = epoch;
    state.epochs_without_improvement = 0;
    return false;
  }
  ++state.epochs_without_improvement;
  return state.epochs_without_improvement >= patience;
}

TrainHistory train(TaggerModel& model, const std::vector<TokenizedExample>& train_set,
                   const std::vector<TokenizedExample>& dev_set, const TrainConfig& config) {
  if (train_set.empty()) throw ArgumentError("train(): empty training set");
  if (dev_set.empty()) throw ArgumentError("train(): empty dev set");
  if (config.max_epochs <= 0 || config.batch_size <= 0 || config.learning_rate <= 0)
    throw ArgumentError("train(): max_epochs, batch_size and learning_rate must be positive");
  if (config.patience_epochs <= 0 || config.patience_epochs >= config.max_epochs)
    throw ArgumentError("train(): patience must be positive and below max_epochs");

  ClassWeights weights = config.weights.empty() ? class_weights(model.task()) : config.weights;
  if (weights.size() != static_cast<size_t>(model.n_classes()))
    throw ArgumentError("train(): class weight vector has wrong size");
  if (weights[static_cast<size_t>(pad_label(model.task()))] != 0.0f)
    throw ArgumentError("train(): the padding class must carry weight 0");

  for (const TokenizedExample& ex : train_set) check_example(ex, model.max_len(), model.n_classes());
  for (const TokenizedExample& ex : dev_set) check_example(ex, model.max_len(), model.n_classes());

  std::vector<ParamRef> params = model.parameters();
  AdamOptimizer opt(params, config.learning_rate);
  Rng rng(config.seed);

  TrainHistory history;
  EarlyStopState stop;
  std::vector<Eigen::MatrixXf> best_snapshot = snapshot_params(params);
  std::vector<size_t> order(train_set.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0, weight_sum = 0;
    for (size_t begin = 0; begin < order.size(); begin += static_cast<size_t>(config.batch_size)) {
      const size_t end =
          std::min(order.size(), begin + static_cast<size_t>(config.batch_size));
      std::vector<const TokenizedExample*> batch;
      for (size_t i = begin; i < end; ++i) batch.push_back(&train_set[order[i]]);
      opt.zero_grad();
      BatchResult r = run_batch(model, model.backend(), batch, weights, true);
      if (!std::isfinite(r.loss_sum))
        throw TrainError("epoch " + std::to_string(epoch) + ", batch at " +
                         std::to_string(begin) + ": non-finite loss");
      loss_sum += r.loss_sum;
      weight_sum += r.weight_sum;
      opt.step();
    }
    EpochStats stats;
    stats.train_loss = weight_sum > 0 ? loss_sum / weight_sum : 0.0;
    stats.dev_f1 = dev_token_f1(model, dev_set);
    history.epochs.push_back(stats);

    const bool improved = stats.dev_f1 > stop.best;
    const bool halt = early_stop_update(stop, epoch, stats.dev_f1, config.patience_epochs);
    if (improved) best_snapshot = snapshot_params(params);
    if (halt) {
      history.stopped_early = true;
      break;
    }
  }
  restore_params(params, best_snapshot);
  history.best_epoch = stop.best_epoch;
  return history;
}

namespace {

int argmax_class(const Eigen::MatrixXf& probs, int row) {
  int best = 0;
  float best_p = probs(row, 0);
  for (int c = 1; c < probs.cols(); ++c) {
    if (probs(row, c) > best_p) {
      best_p = probs(row, c);
      best = c;
    }
  }
  return best;
}

template <typename Fn>
void for_each_real_token(TaggerModel& model, const std::vector<TokenizedExample>& examples,
                         Fn&& fn) {
  constexpr int kBatch = 64;
  std::vector<const TokenizedExample*> batch;
  std::vector<Eigen::MatrixXf> hidden;
  for (size_t begin = 0; begin < examples.size(); begin += kBatch) {
    const size_t end = std::min(examples.size(), begin + kBatch);
    batch.clear();
    for (size_t i = begin; i < end; ++i) batch.push_back(&examples[i]);
    model.backend().encode(batch, hidden, false);
    for (size_t b = 0; b < batch.size(); ++b) {
      Eigen::MatrixXf logits = hidden[b] * model.head_w;
      logits.rowwise() += model.head_b.row(0);
      const TokenizedExample& ex = *batch[b];
      for (int t = 0; t < ex.n_real_tokens; ++t) {
        fn(ex.token_labels[static_cast<size_t>(t)], argmax_class(logits, t));
      }
    }
  }
}

}  // namespace

double dev_token_f1(TaggerModel& model, const std::vector<TokenizedExample>& examples) {
  const std::vector<int> positive = positive_classes(model.task());
  auto is_positive = [&](int lbl) {
    return std::find(positive.begin(), positive.end(), lbl) != positive.end();
  };
  long long tp = 0, fp = 0, fn = 0;
  for_each_real_token(model, examples, [&](int gold, int pred) {
    const bool g = is_positive(gold), p = is_positive(pred);
    if (g && p) ++tp;
    else if (p) ++fp;
    else if (g) ++fn;
  });
  const long long denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

double token_accuracy(TaggerModel& model, const std::vector<TokenizedExample>& examples) {
  long long hit = 0, total = 0;
  for_each_real_token(model, examples, [&](int gold, int pred) {
    ++total;
    hit += gold == pred;
  });
  return total == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(total);
}

void write_history_csv(const TrainHistory& history, std::ostream& out) {
  out << "epoch,train_loss,dev_f1\n";
  for (size_t i = 0; i < history.epochs.size(); ++i) {
    out << (i + 1) << ',' << history.epochs[i].train_loss << ',' << history.epochs[i].dev_f1
        << "\n";
  }
  out << "# best_epoch=" << history.best_epoch
      << " stopped_early=" << (history.stopped_early ? "true" : "false") << "\n";
}

void TaggerModel::save(const std::string& dir, const KvFile* extra) const {
  fs::create_directories(dir);
  write_tensors((fs::path(dir) / "head.nstf").string(),
                {to_tensor("head.weight", head_w), to_tensor("head.bias", head_b)});
  backend_->save(dir);
  KvFile manifest;
  manifest.set("format", "negscope-checkpoint-v1");
  manifest.set("task", to_string(task_));
  manifest.set("n_classes", static_cast<long long>(n_classes_));
  manifest.set("max_len", static_cast<long long>(max_len_));
  backend_->describe_to(manifest);
  if (extra) {
    for (const auto& [k, v] : extra->items()) manifest.set(k, v);
  }
  manifest.save((fs::path(dir) / "manifest.kv").string());
}

KvFile TaggerModel::read_manifest(const std::string& dir) {
  return KvFile::load((fs::path(dir) / "manifest.kv").string());
}

TaggerModel TaggerModel::load(const std::string& dir) {
  KvFile manifest = read_manifest(dir);
  const std::string task_name = manifest.get("task");
  Task task;
  if (task_name == "cue") task = Task::kCue;
  else if (task_name == "scope") task = Task::kScope;
  else throw ConfigError("checkpoint '" + dir + "': unknown task '" + task_name + "'");

  BackendSpec spec;
  spec.kind = manifest.get("backend");
  spec.dir = dir;
  spec.hidden = static_cast<int>(manifest.get_int_or("backend_hidden", spec.hidden));
  spec.vocab = static_cast<int>(manifest.get_int_or("backend_vocab", spec.vocab));
  auto backend = make_backend(spec);

  TaggerModel model(std::shared_ptr<EncoderBackend>(std::move(backend)), task,
                    static_cast<int>(manifest.get_int("max_len")), 0);
  if (static_cast<long long>(model.n_classes()) != manifest.get_int("n_classes"))
    throw ConfigError("checkpoint '" + dir + "': class count mismatch");
  auto tensors = read_tensors((fs::path(dir) / "head.nstf").string());
  Eigen::MatrixXf w = to_matrix(require_tensor(tensors, "head.weight", dir));
  Eigen::MatrixXf b = to_matrix(require_tensor(tensors, "head.bias", dir));
  if (w.rows() != model.head_w.rows() || w.cols() != model.head_w.cols())
    throw ShapeError("checkpoint '" + dir + "': head weight shape mismatch");
  model.head_w = w;
  model.head_b = b;
  return model;
}

}  // namespace negscope
