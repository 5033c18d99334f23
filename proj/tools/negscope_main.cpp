// Command-line surface over the negation pipeline: corpus ingestion into a
// JSON-lines interchange format, seeded splits, tagger training, cross-corpus
// evaluation, and the punctuation partition analysis.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage/config error.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "negscope/bioscope.hpp"
#include "negscope/cdsco.hpp"
#include "negscope/corpus.hpp"
#include "negscope/decode.hpp"
#include "negscope/encoding.hpp"
#include "negscope/errors.hpp"
#include "negscope/eval.hpp"
#include "negscope/jsonl.hpp"
#include "negscope/kv.hpp"
#include "negscope/punct.hpp"
#include "negscope/split.hpp"
#include "negscope/tagger.hpp"
#include "negscope/tokenize.hpp"

namespace fs = std::filesystem;
using namespace negscope;

namespace {

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open corpus file '" + path + "'");
  return read_jsonl(in);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  return out;
}

Task task_from_name(const std::string& name) {
  if (name == "cue") return Task::kCue;
  if (name == "scope") return Task::kScope;
  throw ConfigError("unknown task '" + name + "'");
}

MarkStrategy strategy_from_name(const std::string& name) {
  const std::optional<MarkStrategy> s = mark_strategy_from_string(name);
  if (!s) throw ConfigError("unknown cue-marking strategy '" + name + "'");
  return *s;
}

std::string slug(const std::string& s) {
  std::string out;
  for (char c : s)
    out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out.empty() ? std::string("x") : out;
}

// --- ingest ----------------------------------------------------------------

struct IngestOptions {
  std::string format;
  std::vector<std::string> inputs;
  std::string out;
  std::string corpus = "custom";
  std::string label;
};

std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<std::string> files;
  for (const std::string& input : inputs) {
    if (fs::is_directory(input)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::recursive_directory_iterator(input)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().filename().string().front() == '.') continue;
        found.push_back(entry.path().string());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(input);
    }
  }
  return files;
}

int cmd_ingest(const IngestOptions& o) {
  std::vector<Sentence> all;
  std::vector<std::string> warnings;
  for (const std::string& file : expand_inputs(o.inputs)) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot open input '" + file + "'");
    std::vector<Sentence> parsed;
    if (o.format == "cdsco") {
      parsed = parse_cdsco(in, o.corpus, &warnings);
    } else if (o.format == "bioscope") {
      parsed = parse_bioscope(in, o.corpus, &warnings);
    } else {
      std::string doc = fs::path(file).stem().string();
      for (const std::string& input : o.inputs) {
        if (fs::is_directory(input) && file.rfind(input, 0) == 0) {
          doc = fs::relative(file, input).replace_extension("").generic_string();
          break;
        }
      }
      parsed = parse_sfu(in, doc, o.corpus, &warnings);
    }
    all.insert(all.end(), parsed.begin(), parsed.end());
  }
  for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';

  long long n_instances = 0, n_empty_scope = 0;
  long long by_class[3] = {0, 0, 0};
  for (const Sentence& s : all) {
    n_instances += static_cast<long long>(s.instances.size());
    for (const NegationInstance& inst : s.instances) {
      ++by_class[static_cast<int>(inst.cue.cue_class)];
      if (inst.scope.empty()) ++n_empty_scope;
    }
  }

  std::ofstream out = open_out(o.out);
  write_jsonl_sentences(all, o.corpus, o.label.empty() ? o.corpus : o.label, out);

  std::cout << "sentences: " << all.size() << '\n'
            << "instances: " << n_instances << '\n'
            << "cues: affix " << by_class[0] << ", normal " << by_class[1] << ", multiword "
            << by_class[2] << '\n'
            << "empty scopes: " << n_empty_scope << '\n'
            << "warnings: " << warnings.size() << '\n'
            << "wrote " << o.out << '\n';
  return 0;
}

// --- split -------------------------------------------------------------------

struct SplitOptions {
  std::string input;
  std::string out;
  std::string ratios = "0.7,0.15,0.15";
  uint64_t seed = 13;
};

SplitRatios parse_ratios(const std::string& text) {
  std::istringstream in(text);
  std::string part;
  std::vector<double> vals;
  while (std::getline(in, part, ',')) {
    try {
      vals.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw ConfigError("bad ratio '" + part + "' in '" + text + "'");
    }
  }
  if (vals.size() != 3) throw ConfigError("ratios must be three comma-separated numbers");
  return SplitRatios{vals[0], vals[1], vals[2]};
}

int cmd_split(const SplitOptions& o) {
  const Corpus corpus = load_corpus(o.input);
  const SplitResult result = split_corpus(corpus, parse_ratios(o.ratios), o.seed);
  fs::create_directories(o.out);
  {
    std::ofstream out = open_out(o.out + "/train.jsonl");
    write_jsonl(result.train, out);
  }
  {
    std::ofstream out = open_out(o.out + "/dev.jsonl");
    write_jsonl(result.dev, out);
  }
  {
    std::ofstream out = open_out(o.out + "/test.jsonl");
    write_jsonl(result.test, out);
  }
  {
    std::ofstream out = open_out(o.out + "/split_manifest.txt");
    write_split_manifest(result, out);
  }
  KvFile manifest;
  manifest.set("command", "split");
  manifest.set("input", o.input);
  manifest.set("ratios", o.ratios);
  manifest.set("seed", static_cast<long long>(o.seed));
  manifest.set("n_train", static_cast<long long>(result.train.sentences.size()));
  manifest.set("n_dev", static_cast<long long>(result.dev.sentences.size()));
  manifest.set("n_test", static_cast<long long>(result.test.sentences.size()));
  manifest.save(o.out + "/manifest.kv");
  std::cout << "train: " << result.train.sentences.size() << " sentences\n"
            << "dev: " << result.dev.sentences.size() << " sentences\n"
            << "test: " << result.test.sentences.size() << " sentences\n"
            << "wrote " << o.out << '\n';
  return 0;
}

// --- train -------------------------------------------------------------------

struct TrainOptions {
  std::string task;
  std::string train_path;
  std::string dev_path;
  std::string backend = "test-small";
  std::string strategy;
  int max_len = 128;
  std::string out;
  double learning_rate = 3e-5;
  int patience = 6;
  int max_epochs = 60;
  int batch_size = 32;
  uint64_t seed = 13;
};

struct BuiltExamples {
  std::vector<TokenizedExample> examples;
  int n_overflow = 0;
};

BuiltExamples build_examples(const std::vector<Sentence>& sentences, Task task,
                             MarkStrategy strategy, const SubwordTokenizer& tok, int max_len) {
  BuiltExamples out;
  for (const Sentence& s : sentences) {
    if (task == Task::kCue) {
      try {
        out.examples.push_back(
            align_to_subwords(s.words, cue_labels(s), tok, max_len, pad_label(task), s.source));
      } catch (const OverflowError& e) {
        ++out.n_overflow;
        std::cerr << "skipped: " << e.what() << '\n';
      }
    } else {
      for (const NegationInstance& inst : s.instances) {
        try {
          const ScopeExample ex = scope_labels(s, inst, strategy);
          out.examples.push_back(align_to_subwords(ex.marked.words, ex.labels, tok, max_len,
                                                   pad_label(task), s.source));
        } catch (const OverflowError& e) {
          ++out.n_overflow;
          std::cerr << "skipped: " << e.what() << '\n';
        }
      }
    }
  }
  return out;
}

int cmd_train(const TrainOptions& o) {
  const Task task = task_from_name(o.task);
  if (task == Task::kScope && o.strategy.empty())
    throw ConfigError("--strategy is required for scope training");
  const MarkStrategy strategy =
      o.strategy.empty() ? MarkStrategy::kReplace : strategy_from_name(o.strategy);

  const Corpus train_corpus = load_corpus(o.train_path);
  const Corpus dev_corpus = load_corpus(o.dev_path);

  std::shared_ptr<EncoderBackend> backend{make_backend(parse_backend_spec(o.backend))};
  if (task == Task::kScope) register_markers(backend->tokenizer());

  const BuiltExamples train_set =
      build_examples(train_corpus.sentences, task, strategy, backend->tokenizer(), o.max_len);
  const BuiltExamples dev_set =
      build_examples(dev_corpus.sentences, task, strategy, backend->tokenizer(), o.max_len);

  TaggerModel model(backend, task, o.max_len, o.seed);
  TrainConfig cfg;
  cfg.learning_rate = o.learning_rate;
  cfg.patience_epochs = o.patience;
  cfg.max_epochs = o.max_epochs;
  cfg.batch_size = o.batch_size;
  cfg.seed = o.seed;
  const TrainHistory history = train(model, train_set.examples, dev_set.examples, cfg);

  KvFile extra;
  extra.set("command", "train");
  extra.set("train_path", o.train_path);
  extra.set("dev_path", o.dev_path);
  extra.set("train_corpus", to_string(train_corpus.id));
  extra.set("train_label",
            train_corpus.label.empty() ? to_string(train_corpus.id) : train_corpus.label);
  if (task == Task::kScope) extra.set("mark_strategy", to_string(strategy));
  extra.set("backend_spec", o.backend);
  extra.set("seed", static_cast<long long>(o.seed));
  extra.set("learning_rate", o.learning_rate);
  extra.set("patience_epochs", static_cast<long long>(o.patience));
  extra.set("max_epochs", static_cast<long long>(o.max_epochs));
  extra.set("batch_size", static_cast<long long>(o.batch_size));
  extra.set("n_train_examples", static_cast<long long>(train_set.examples.size()));
  extra.set("n_dev_examples", static_cast<long long>(dev_set.examples.size()));
  extra.set("n_overflow_train", static_cast<long long>(train_set.n_overflow));
  extra.set("n_overflow_dev", static_cast<long long>(dev_set.n_overflow));
  extra.set("backend_deterministic", true);
  model.save(o.out, &extra);
  {
    std::ofstream out = open_out(o.out + "/history.csv");
    write_history_csv(history, out);
  }

  const double best_f1 =
      history.best_epoch >= 1 ? history.epochs[history.best_epoch - 1].dev_f1 : 0.0;
  std::cout << "examples: train " << train_set.examples.size() << ", dev "
            << dev_set.examples.size() << '\n'
            << "overflow: train " << train_set.n_overflow << ", dev " << dev_set.n_overflow
            << '\n'
            << "epochs: " << history.epochs.size() << " (best " << history.best_epoch
            << ", dev F1 " << best_f1 << (history.stopped_early ? ", stopped early" : "") << ")\n"
            << "wrote " << o.out << '\n';
  return 0;
}

// --- evaluate ----------------------------------------------------------------

struct EvaluateOptions {
  std::string task;
  std::vector<std::string> checkpoints;
  std::vector<std::string> tests;
  std::string mode = "gold-cue";
  std::string cue_checkpoint;
  std::string strategy;
  bool scope_includes_cue = false;
  std::string out;
};

std::shared_ptr<TaggerModel> load_checkpoint(const std::string& dir, Task want) {
  auto model = std::make_shared<TaggerModel>(TaggerModel::load(dir));
  if (model->task() != want)
    throw ConfigError("checkpoint '" + dir + "' holds a " + to_string(model->task()) +
                      " model, expected " + to_string(want));
  return model;
}

int cmd_evaluate(const EvaluateOptions& o) {
  const Task task = task_from_name(o.task);
  const ScopeEvalMode mode =
      o.mode == "predicted-cue" ? ScopeEvalMode::kPredictedCue : ScopeEvalMode::kGoldCue;
  if (task == Task::kCue && o.mode == "predicted-cue")
    throw ConfigError("--mode predicted-cue applies to the scope task");

  std::vector<Corpus> corpora;
  for (const std::string& path : o.tests) corpora.push_back(load_corpus(path));
  std::vector<const Corpus*> test_sets;
  for (const Corpus& c : corpora) test_sets.push_back(&c);

  std::shared_ptr<TaggerModel> cue_model;
  if (task == Task::kScope && mode == ScopeEvalMode::kPredictedCue) {
    if (o.cue_checkpoint.empty())
      throw ConfigError("--mode predicted-cue needs --cue-checkpoint");
    cue_model = load_checkpoint(o.cue_checkpoint, Task::kCue);
  }

  fs::create_directories(o.out);
  std::vector<CrossPredictor> predictors;
  for (const std::string& dir : o.checkpoints) {
    std::shared_ptr<TaggerModel> model = load_checkpoint(dir, task);
    const KvFile manifest = TaggerModel::read_manifest(dir);
    CrossPredictor p;
    const std::string corpus_name = manifest.get_or("train_corpus", "custom");
    p.train_id = corpus_id_from_string(corpus_name).value_or(CorpusId::kCustom);
    p.train_label = manifest.get_or("train_label", corpus_name);
    const MarkStrategy strategy = strategy_from_name(
        !o.strategy.empty() ? o.strategy : manifest.get_or("mark_strategy", "replace"));
    const std::string out_dir = o.out;
    const std::string train_label = p.train_label;
    const bool include_cue = o.scope_includes_cue;
    p.predict = [=](const std::vector<Sentence>& gold) {
      BatchPrediction bp;
      if (task == Task::kCue) {
        bp = predict_cues(*model, gold);
      } else if (mode == ScopeEvalMode::kGoldCue) {
        bp = predict_scopes_gold_cue(*model, gold, strategy);
      } else {
        bp = predict_end_to_end(*cue_model, *model, gold, strategy, include_cue);
      }
      if (!gold.empty()) {
        const std::string dump = out_dir + "/pred_" + slug(train_label) + "__" +
                                 slug(gold.front().source.corpus) + ".cdsco";
        std::ofstream out = open_out(dump);
        write_cdsco(bp.sentences, out);
      }
      return bp;
    };
    predictors.push_back(std::move(p));
  }

  const CrossMatrix matrix = cross_matrix(predictors, test_sets, task, mode);
  const std::string stem = o.out + "/" + to_string(task) + "_matrix";
  {
    std::ofstream out = open_out(stem + ".json");
    write_matrix_json(matrix, out);
  }
  {
    std::ofstream out = open_out(stem + ".txt");
    write_matrix_text(matrix, out);
  }
  KvFile manifest;
  manifest.set("command", "evaluate");
  manifest.set("task", o.task);
  manifest.set("mode", o.mode);
  for (size_t i = 0; i < o.checkpoints.size(); ++i)
    manifest.set("checkpoint_" + std::to_string(i), o.checkpoints[i]);
  for (size_t i = 0; i < o.tests.size(); ++i)
    manifest.set("test_" + std::to_string(i), o.tests[i]);
  if (!o.cue_checkpoint.empty()) manifest.set("cue_checkpoint", o.cue_checkpoint);
  manifest.set("scope_includes_cue", o.scope_includes_cue);
  manifest.save(o.out + "/manifest.kv");

  write_matrix_text(matrix, std::cout);
  std::cout << "wrote " << stem << ".json\n";
  return 0;
}

// --- punct-analysis ----------------------------------------------------------

struct PunctOptions {
  std::string checkpoint;
  std::string corpus;
  std::string symbols;
  std::string strategy;
  std::string out;
};

int cmd_punct(const PunctOptions& o) {
  std::shared_ptr<TaggerModel> model = load_checkpoint(o.checkpoint, Task::kScope);
  const KvFile manifest = TaggerModel::read_manifest(o.checkpoint);
  const MarkStrategy strategy = strategy_from_name(
      !o.strategy.empty() ? o.strategy : manifest.get_or("mark_strategy", "replace"));
  const std::string symbols = o.symbols.empty() ? default_punct_symbols() : o.symbols;

  const Corpus gold = load_corpus(o.corpus);
  const BatchPrediction pred = predict_scopes_gold_cue(*model, gold.sentences, strategy);
  const PunctReport report = punct_pcs_report(gold.sentences, pred.sentences, symbols);

  fs::create_directories(o.out);
  {
    std::ofstream out = open_out(o.out + "/punct_report.json");
    write_punct_json(report, out);
  }
  {
    std::ofstream out = open_out(o.out + "/punct_report.txt");
    write_punct_text(report, out);
  }
  KvFile meta;
  meta.set("command", "punct-analysis");
  meta.set("checkpoint", o.checkpoint);
  meta.set("corpus", o.corpus);
  meta.set("symbols", symbols);
  meta.save(o.out + "/manifest.kv");

  write_punct_text(report, std::cout);
  if (pred.n_overflow > 0) std::cout << "overflow: " << pred.n_overflow << " instances\n";
  std::cout << "wrote " << o.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-stage negation cue and scope pipeline"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "key=value config file; prefix keys with the subcommand name, "
                 "e.g. train.task=cue");

  IngestOptions ingest;
  CLI::App* cmd_i = app.add_subcommand("ingest", "parse a corpus into the JSON-lines format");
  cmd_i->add_option("--format", ingest.format, "input format")
      ->required()
      ->check(CLI::IsMember({"cdsco", "bioscope", "sfu"}));
  cmd_i->add_option("--input", ingest.inputs, "input file or directory (repeatable)")->required();
  cmd_i->add_option("--out", ingest.out, "output .jsonl file")->required();
  cmd_i->add_option("--corpus", ingest.corpus, "corpus name recorded per sentence");
  cmd_i->add_option("--label", ingest.label, "display label (defaults to the corpus name)");

  SplitOptions split;
  CLI::App* cmd_s = app.add_subcommand("split", "seeded sentence-level train/dev/test split");
  cmd_s->add_option("--input", split.input, "ingested .jsonl corpus")->required();
  cmd_s->add_option("--out", split.out, "output directory")->required();
  cmd_s->add_option("--ratios", split.ratios, "train,dev,test fractions");
  cmd_s->add_option("--seed", split.seed, "shuffle seed");

  TrainOptions train;
  CLI::App* cmd_t = app.add_subcommand("train", "train a cue or scope tagger");
  cmd_t->add_option("--task", train.task, "cue or scope")
      ->required()
      ->check(CLI::IsMember({"cue", "scope"}));
  cmd_t->add_option("--train", train.train_path, "training .jsonl corpus")->required();
  cmd_t->add_option("--dev", train.dev_path, "development .jsonl corpus")->required();
  cmd_t->add_option("--backend", train.backend,
                    "encoder spec, e.g. test-small,hidden=64 or "
                    "pretrained-base-uncased,dir=weights/");
  cmd_t->add_option("--strategy", train.strategy, "cue marking: replace or augment")
      ->check(CLI::IsMember({"replace", "augment"}));
  cmd_t->add_option("--max-len", train.max_len, "token length budget per example");
  cmd_t->add_option("--out", train.out, "checkpoint directory")->required();
  cmd_t->add_option("--lr", train.learning_rate, "Adam learning rate");
  cmd_t->add_option("--patience", train.patience, "early-stopping patience in epochs");
  cmd_t->add_option("--max-epochs", train.max_epochs, "epoch cap");
  cmd_t->add_option("--batch-size", train.batch_size, "mini-batch size");
  cmd_t->add_option("--seed", train.seed, "shuffle/init seed");

  EvaluateOptions evaluate;
  CLI::App* cmd_e = app.add_subcommand("evaluate", "cross-corpus evaluation matrix");
  cmd_e->add_option("--task", evaluate.task, "cue or scope")
      ->required()
      ->check(CLI::IsMember({"cue", "scope"}));
  cmd_e->add_option("--checkpoint", evaluate.checkpoints, "checkpoint directory (repeatable)")
      ->required();
  cmd_e->add_option("--test", evaluate.tests, "test .jsonl corpus (repeatable)")->required();
  cmd_e->add_option("--mode", evaluate.mode, "scope evaluation mode")
      ->check(CLI::IsMember({"gold-cue", "predicted-cue"}));
  cmd_e->add_option("--cue-checkpoint", evaluate.cue_checkpoint,
                    "cue model for predicted-cue scope evaluation");
  cmd_e->add_option("--strategy", evaluate.strategy,
                    "override the checkpoint's cue-marking strategy");
  cmd_e->add_flag("--scope-includes-cue", evaluate.scope_includes_cue,
                  "predicted-cue mode: count cue words as in scope");
  cmd_e->add_option("--out", evaluate.out, "report directory")->required();

  PunctOptions punct;
  CLI::App* cmd_p =
      app.add_subcommand("punct-analysis", "exact-scope rates by punctuation partition");
  cmd_p->add_option("--checkpoint", punct.checkpoint, "scope checkpoint directory")->required();
  cmd_p->add_option("--corpus", punct.corpus, "gold .jsonl corpus")->required();
  cmd_p->add_option("--symbols", punct.symbols, "punctuation symbol set override");
  cmd_p->add_option("--strategy", punct.strategy,
                    "override the checkpoint's cue-marking strategy");
  cmd_p->add_option("--out", punct.out, "report directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cmd_i) return cmd_ingest(ingest);
    if (*cmd_s) return cmd_split(split);
    if (*cmd_t) return cmd_train(train);
    if (*cmd_e) return cmd_evaluate(evaluate);
    if (*cmd_p) return cmd_punct(punct);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ArgumentError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
