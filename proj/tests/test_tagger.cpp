#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "negscope/encoding.hpp"
#include "negscope/errors.hpp"
#include "negscope/kv.hpp"
#include "negscope/tagger.hpp"
#include "negscope/test_backend.hpp"
#include "testutil.hpp"

using namespace negscope;

namespace {

std::vector<TokenizedExample> cue_examples(const std::vector<Sentence>& sentences,
                                           const SubwordTokenizer& tok, int max_len) {
  std::vector<TokenizedExample> out;
  for (const Sentence& s : sentences)
    out.push_back(align_to_subwords(s.words, cue_labels(s), tok, max_len, kCuePad, s.source));
  return out;
}

}  // namespace

TEST_CASE("early stopping: strict improvement resets the counter") {
  const std::vector<double> trace{0.5, 0.6, 0.6, 0.6, 0.6, 0.6, 0.6, 0.6};
  EarlyStopState state;
  int halted_at = 0;
  for (size_t i = 0; i < trace.size(); ++i) {
    const bool halt = early_stop_update(state, static_cast<int>(i + 1), trace[i], 6);
    if (halt) {
      halted_at = static_cast<int>(i + 1);
      break;
    }
  }
  CHECK(halted_at == 8);
  CHECK(state.best == 0.6);
  CHECK(state.best_epoch == 2);
  CHECK(state.epochs_without_improvement == 6);

  // Ties do not count as improvement, drops do not reset.
  EarlyStopState s2;
  CHECK_FALSE(early_stop_update(s2, 1, 0.9, 2));
  CHECK_FALSE(early_stop_update(s2, 2, 0.9, 2));
  CHECK(early_stop_update(s2, 3, 0.8, 2));
  CHECK(s2.best_epoch == 1);
}

TEST_CASE("adam: first step moves by the learning rate in the gradient direction") {
  Eigen::MatrixXf value(1, 3);
  value << 1.0f, -2.0f, 0.5f;
  Eigen::MatrixXf grad(1, 3);
  grad << 0.5f, -0.25f, 0.0f;

  AdamOptimizer opt({ParamRef{"p", &value, &grad}}, 0.1);
  opt.step();
  CHECK(value(0, 0) == doctest::Approx(0.9).epsilon(1e-5));
  CHECK(value(0, 1) == doctest::Approx(-1.9).epsilon(1e-5));
  CHECK(value(0, 2) == 0.5f);  // zero gradient, zero update

  opt.zero_grad();
  CHECK(grad(0, 0) == 0.0f);
  CHECK(grad(0, 1) == 0.0f);
}

TEST_CASE("backend specs parse and reject unknown options") {
  const BackendSpec spec = parse_backend_spec("test-small,hidden=64,vocab=2048,seed=7");
  CHECK(spec.kind == "test-small");
  CHECK(spec.hidden == 64);
  CHECK(spec.vocab == 2048);
  CHECK(spec.seed == 7);
  CHECK(parse_backend_spec("test-small").hidden == 32);

  CHECK_THROWS_AS(parse_backend_spec(""), ConfigError);
  CHECK_THROWS_AS(parse_backend_spec("test-small,hidden"), ConfigError);
  CHECK_THROWS_AS(parse_backend_spec("test-small,hidden=x"), ConfigError);
  CHECK_THROWS_AS(parse_backend_spec("test-small,colour=red"), ConfigError);
  CHECK_THROWS_AS(make_backend(parse_backend_spec("giant-model")), ConfigError);
  CHECK_THROWS_AS(make_backend(parse_backend_spec("pretrained-base-uncased")), ConfigError);
}

TEST_CASE("prediction: softmax rows, batch-size independence, shape checks") {
  auto backend = std::make_shared<TestEncoder>(16, 64, 5);
  TaggerModel model(backend, Task::kCue, 10, 7);
  const auto exs = cue_examples(testutil::synthetic_cue_corpus(5, 31), backend->tokenizer(), 10);

  const auto dists = model.predict_distributions(exs, 2);
  REQUIRE(dists.size() == exs.size());
  REQUIRE(dists[0].size() == 10);
  REQUIRE(dists[0][0].size() == 5);
  for (const auto& token : dists[0]) {
    double sum = 0;
    for (float p : token) {
      CHECK(p >= 0.0f);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0));
  }
  CHECK(model.predict_distributions(exs, 3) == dists);
  CHECK(model.predict_distributions(exs, 64) == dists);

  TokenizedExample wrong_len = exs[0];
  wrong_len.max_len = 12;
  CHECK_THROWS_AS(model.predict_distributions({wrong_len}), ShapeError);

  TokenizedExample wrong_label = exs[0];
  wrong_label.token_labels[0] = 9;
  CHECK_THROWS_AS(model.predict_distributions({wrong_label}), DataError);
  CHECK_THROWS_AS(model.predict_distributions(exs, 0), ArgumentError);
}

TEST_CASE("loss ignores padding positions and zero-weight classes") {
  auto backend = std::make_shared<TestEncoder>(16, 64, 5);
  TaggerModel model(backend, Task::kCue, 12, 7);
  const auto exs = cue_examples(testutil::synthetic_cue_corpus(4, 77), backend->tokenizer(), 12);
  const ClassWeights weights = class_weights(Task::kCue);

  const double base = model.training_loss(exs, weights);
  CHECK(base > 0.0);

  auto mutated = exs;
  for (TokenizedExample& ex : mutated) {
    for (int t = ex.n_real_tokens; t < ex.max_len; ++t)
      ex.token_labels[static_cast<size_t>(t)] = kCueNormal;
  }
  CHECK(model.training_loss(mutated, weights) == base);  // bit-identical

  ClassWeights only_cues = weights;
  only_cues[kCueNone] = 0.0f;
  Sentence plain = testutil::make_sentence({"alpha", "bravo", "casta"});
  const auto plain_ex =
      cue_examples({plain}, backend->tokenizer(), 12);
  CHECK(model.training_loss(plain_ex, only_cues) == 0.0);

  CHECK_THROWS_AS(model.training_loss(exs, ClassWeights{1, 1}), ArgumentError);
}

TEST_CASE("accumulated gradients match central finite differences") {
  auto backend = std::make_shared<TestEncoder>(8, 48, 21);
  TaggerModel model(backend, Task::kCue, 8, 22);
  const auto batch = cue_examples(testutil::synthetic_cue_corpus(2, 17), backend->tokenizer(), 8);
  const ClassWeights weights = class_weights(Task::kCue);

  std::vector<ParamRef> params = model.parameters();
  for (ParamRef& p : params) p.grad->setZero();
  const double loss = model.accumulate_gradients(batch, weights);
  CHECK(loss == doctest::Approx(model.training_loss(batch, weights)));

  const float h = 5e-3f;
  for (ParamRef& p : params) {
    for (Eigen::Index r = 0; r < p.value->rows(); ++r) {
      for (Eigen::Index c = 0; c < p.value->cols(); ++c) {
        const float orig = (*p.value)(r, c);
        (*p.value)(r, c) = orig + h;
        const double up = model.training_loss(batch, weights);
        (*p.value)(r, c) = orig - h;
        const double down = model.training_loss(batch, weights);
        (*p.value)(r, c) = orig;
        const double fd = (up - down) / (2.0 * static_cast<double>(h));
        const double g = (*p.grad)(r, c);
        INFO(p.name << "(" << r << "," << c << ") fd=" << fd << " grad=" << g);
        CHECK(std::abs(fd - g) <= 1e-3 + 0.03 * std::max(std::abs(fd), std::abs(g)));
      }
    }
  }
}

TEST_CASE("training learns a synthetic cue vocabulary and stops early") {
  auto backend = std::make_shared<TestEncoder>(32, 512, 3);
  TaggerModel model(backend, Task::kCue, 12, 5);

  const auto sentences = testutil::synthetic_cue_corpus(60, 99);
  std::vector<Sentence> train_sents(sentences.begin(), sentences.begin() + 50);
  std::vector<Sentence> dev_sents(sentences.begin() + 50, sentences.end());
  const auto train_ex = cue_examples(train_sents, backend->tokenizer(), 12);
  const auto dev_ex = cue_examples(dev_sents, backend->tokenizer(), 12);

  TrainConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.patience_epochs = 3;
  cfg.max_epochs = 30;
  cfg.batch_size = 16;
  cfg.seed = 7;

  const TrainHistory history = train(model, train_ex, dev_ex, cfg);
  REQUIRE_FALSE(history.epochs.empty());
  CHECK(token_accuracy(model, dev_ex) == 1.0);
  CHECK(dev_token_f1(model, dev_ex) == 1.0);

  // The recorded history must be consistent with the early-stopping rule.
  EarlyStopState replay;
  bool halted = false;
  size_t halted_at = 0;
  for (size_t i = 0; i < history.epochs.size(); ++i) {
    if (early_stop_update(replay, static_cast<int>(i + 1), history.epochs[i].dev_f1,
                          cfg.patience_epochs)) {
      halted = true;
      halted_at = i + 1;
      break;
    }
  }
  CHECK(replay.best_epoch == history.best_epoch);
  CHECK(halted == history.stopped_early);
  if (halted) CHECK(halted_at == history.epochs.size());

  // The model is left at the best epoch's weights.
  CHECK(dev_token_f1(model, dev_ex) ==
        doctest::Approx(history.epochs[static_cast<size_t>(history.best_epoch - 1)].dev_f1));
}

TEST_CASE("training rejects bad configurations") {
  auto backend = std::make_shared<TestEncoder>(8, 64, 1);
  TaggerModel model(backend, Task::kCue, 10, 2);
  const auto exs = cue_examples(testutil::synthetic_cue_corpus(4, 8), backend->tokenizer(), 10);

  TrainConfig cfg;
  cfg.max_epochs = 5;
  cfg.patience_epochs = 6;
  CHECK_THROWS_AS(train(model, exs, exs, cfg), ArgumentError);
  cfg.patience_epochs = 0;
  CHECK_THROWS_AS(train(model, exs, exs, cfg), ArgumentError);

  cfg.patience_epochs = 2;
  cfg.weights = {1, 1, 1, 1, 1};  // padding class must stay at 0
  CHECK_THROWS_AS(train(model, exs, exs, cfg), ArgumentError);
  cfg.weights = {1, 1};
  CHECK_THROWS_AS(train(model, exs, exs, cfg), ArgumentError);
  cfg.weights.clear();

  CHECK_THROWS_AS(train(model, {}, exs, cfg), ArgumentError);
  CHECK_THROWS_AS(train(model, exs, {}, cfg), ArgumentError);
}

TEST_CASE("non-finite loss aborts training with the epoch and batch") {
  auto backend = std::make_shared<TestEncoder>(8, 64, 1);
  TaggerModel model(backend, Task::kCue, 10, 2);
  const auto exs = cue_examples(testutil::synthetic_cue_corpus(4, 8), backend->tokenizer(), 10);
  model.head_w.setConstant(std::numeric_limits<float>::quiet_NaN());

  TrainConfig cfg;
  cfg.patience_epochs = 2;
  cfg.max_epochs = 5;
  try {
    train(model, exs, exs, cfg);
    FAIL("expected TrainError");
  } catch (const TrainError& e) {
    CHECK(std::string(e.what()).find("epoch 1") != std::string::npos);
  }
}

TEST_CASE("checkpoints restore the exact model") {
  auto backend = std::make_shared<TestEncoder>(16, 64, 9);
  register_markers(backend->tokenizer());
  TaggerModel model(backend, Task::kScope, 8, 11);

  std::vector<Sentence> sents = testutil::synthetic_cue_corpus(3, 41, true);
  std::vector<TokenizedExample> exs;
  for (const Sentence& s : sents) {
    const ScopeExample se = scope_labels(s, s.instances[0], MarkStrategy::kReplace);
    exs.push_back(align_to_subwords(se.marked.words, se.labels, backend->tokenizer(), 8,
                                    kScopePad, s.source));
  }

  const std::string dir = testutil::temp_dir("tagger_ckpt");
  KvFile extra;
  extra.set("mark_strategy", "replace");
  model.save(dir, &extra);

  TaggerModel loaded = TaggerModel::load(dir);
  CHECK(loaded.task() == Task::kScope);
  CHECK(loaded.max_len() == 8);
  CHECK(loaded.n_classes() == 3);
  CHECK(loaded.backend().tokenizer().specials() ==
        std::vector<std::string>{"token[0]", "token[1]", "token[2]"});
  CHECK(loaded.predict_distributions(exs) == model.predict_distributions(exs));

  const KvFile manifest = TaggerModel::read_manifest(dir);
  CHECK(manifest.get("format") == "negscope-checkpoint-v1");
  CHECK(manifest.get("task") == "scope");
  CHECK(manifest.get_int("n_classes") == 3);
  CHECK(manifest.get_int("max_len") == 8);
  CHECK(manifest.get("backend") == "test-small");
  CHECK(manifest.get_int("backend_hidden") == 16);
  CHECK(manifest.get_int("backend_vocab") == 64);
  CHECK(manifest.get("mark_strategy") == "replace");
}

TEST_CASE("history csv lists epochs and the stopping footer") {
  TrainHistory history;
  history.epochs = {{0.5, 0.25}, {0.4, 0.5}};
  history.best_epoch = 2;
  history.stopped_early = true;
  std::ostringstream out;
  write_history_csv(history, out);
  CHECK(out.str() ==
        "epoch,train_loss,dev_f1\n"
        "1,0.5,0.25\n"
        "2,0.4,0.5\n"
        "# best_epoch=2 stopped_early=true\n");
}
