// Copyright 2026 The TLA-Net Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tla/commands.h"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>

#include "tla/checkpoint.h"
#include "tla/errors.h"
#include "tla/io.h"
#include "tla/recurrence.h"
#include "tla/synthetic.h"

namespace tla {

using nlohmann::json;
namespace fs = std::filesystem;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const IoError*>(&e) ||
      dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ValidationError*>(&e))
    return kExitConfigError;
  if (dynamic_cast<const TrainingError*>(&e)) return kExitDivergence;
  if (dynamic_cast<const ArtifactError*>(&e)) return kExitArtifactError;
  return kExitCheckFailure;
}

namespace {

// Reads an object's keys under a dotted prefix and rejects leftovers.
class Fields {
 public:
  Fields(const json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {
    if (!j.is_object()) throw ConfigError(where("") + "must be a JSON object");
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where(key) + "wrong type");
    }
  }
  const json* sub(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(where(it.key()) + "unknown key");
  }
  std::string where(const std::string& key) const {
    std::string path = prefix_;
    if (!key.empty()) path += (path.empty() ? "" : ".") + key;
    return path.empty() ? "" : path + ": ";
  }

 private:
  const json& j_;
  std::string prefix_;
  std::set<std::string> seen_;
};

void check_schema(Fields& f) {
  int version = -1;
  f.read("schema_version", version);
  if (version != kConfigSchemaVersion)
    throw ConfigError("schema_version: expected " + std::to_string(kConfigSchemaVersion) +
                      ", got " + std::to_string(version));
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

json read_json_file(const fs::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trace_csv(const std::vector<EpochRecord>& trace) {
  std::string out = "epoch,classification,reconstruction,combined\n";
  for (const auto& r : trace) {
    out += std::to_string(r.epoch) + "," + format_double(r.mean.classification) + "," +
           format_double(r.mean.reconstruction) + "," + format_double(r.mean.combined) + "\n";
  }
  return out;
}

json trace_json(const std::vector<EpochRecord>& trace) {
  json out = json::array();
  for (const auto& r : trace)
    out.push_back({{"epoch", r.epoch},
                   {"classification", r.mean.classification},
                   {"reconstruction", r.mean.reconstruction},
                   {"combined", r.mean.combined}});
  return out;
}

std::vector<EpochRecord> trace_from_json(const json& j) {
  std::vector<EpochRecord> out;
  for (const auto& r : j) {
    EpochRecord e;
    e.epoch = r.at("epoch").get<std::size_t>();
    e.mean.classification = r.at("classification").get<double>();
    e.mean.reconstruction = r.at("reconstruction").get<double>();
    e.mean.combined = r.at("combined").get<double>();
    out.push_back(e);
  }
  return out;
}

json report_json(const EvalReport& r) {
  json per_class = json::array();
  for (const auto& c : r.per_class)
    per_class.push_back({{"precision", c.precision}, {"recall", c.recall},
                         {"f1", c.f1}, {"support", c.support}});
  return {{"averaging", averaging_name(r.scheme)}, {"accuracy", r.accuracy},
          {"precision", r.precision}, {"recall", r.recall}, {"f1", r.f1},
          {"coverage", r.coverage}, {"total", r.total}, {"rejected", r.rejected},
          {"per_class", per_class}, {"warnings", r.warnings}};
}

json input_entry(const fs::path& path) {
  return {{"path", path.string()}, {"git_blob_hash", git_blob_hash(read_file(path))}};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

// ---------------------------------------------------------------------------
// Experiment config

ExperimentConfig::ExperimentConfig() {
  classifier.vocab_size = 2;
}

void ExperimentConfig::validate() const {
  ClassifierConfig c = classifier;
  c.vocab_size = std::max<std::size_t>(c.vocab_size, 2);
  c.validate();
  if (train_path.empty()) throw ConfigError("data.train: missing");
  if (!fs::exists(train_path))
    throw ConfigError("data.train: no such file " + train_path.string());
  if (test_path && !fs::exists(*test_path))
    throw ConfigError("data.test: no such file " + test_path->string());
  if (vocab_max_size < 2) throw ConfigError("vocab.max_size: must be >= 2");
  if (vocab_min_freq < 1) throw ConfigError("vocab.min_freq: must be >= 1");
  const AdamConfig& a = training.adam;
  if (!(a.learning_rate > 0)) throw ConfigError("training.learning_rate: must be > 0");
  if (!(a.beta1 >= 0 && a.beta1 < 1)) throw ConfigError("training.beta1: must lie in [0, 1)");
  if (!(a.beta2 >= 0 && a.beta2 < 1)) throw ConfigError("training.beta2: must lie in [0, 1)");
  if (!(a.epsilon > 0)) throw ConfigError("training.epsilon: must be > 0");
  if (!(a.clip_norm >= 0)) throw ConfigError("training.clip_norm: must be >= 0");
  if (training.batch_size < 1) throw ConfigError("training.batch_size: must be >= 1");
  if (training.epochs < 1) throw ConfigError("training.epochs: must be >= 1");
  if (!(training.lambda >= 0)) throw ConfigError("training.lambda: must be >= 0");
  if (!(theta >= 0 && theta <= 1)) throw ConfigError("theta: must lie in [0, 1]");
  if (rejection.enabled && rejection.epochs < 1)
    throw ConfigError("rejection.epochs: must be >= 1");
  if (rejection.enabled && !(rejection.learning_rate > 0))
    throw ConfigError("rejection.learning_rate: must be > 0");
  if (model == ModelKind::kWord2VecFeatures) {
    if (word2vec.window < 1) throw ConfigError("word2vec.window: must be >= 1");
    if (word2vec.negatives < 1) throw ConfigError("word2vec.negatives: must be >= 1");
    if (word2vec.batch_size < 1) throw ConfigError("word2vec.batch_size: must be >= 1");
    if (!(word2vec.lr_start > 0 && word2vec.lr_end > 0))
      throw ConfigError("word2vec: learning rates must be > 0");
  }
  if (jobs < 1) throw ConfigError("jobs: must be >= 1");
}

ExperimentConfig experiment_config_from_json(const json& j, const fs::path& base_dir) {
  ExperimentConfig c;
  Fields f(j, "");
  check_schema(f);
  std::string model = std::string(model_kind_name(c.model));
  f.read("model", model);
  try {
    c.model = parse_model_kind(model);
  } catch (const Error& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }

  if (const json* d = f.sub("data")) {
    Fields df(*d, "data");
    std::string train, test, language = "english";
    df.read("train", train);
    df.read("test", test);
    df.read("language", language);
    df.finish();
    if (!train.empty()) c.train_path = resolve(base_dir, train);
    if (!test.empty()) c.test_path = resolve(base_dir, test);
    try {
      c.language = parse_language(language);
    } catch (const Error& e) {
      throw ConfigError(std::string("data.language: ") + e.what());
    }
  }
  if (const json* v = f.sub("vocab")) {
    Fields vf(*v, "vocab");
    vf.read("max_size", c.vocab_max_size);
    vf.read("min_freq", c.vocab_min_freq);
    vf.finish();
  }
  if (const json* m = f.sub("classifier")) {
    if (m->contains("vocab_size"))
      throw ConfigError("classifier.vocab_size: set from the data, not the config");
    c.classifier = classifier_config_from_json(*m, c.classifier);
  }
  if (const json* t = f.sub("training")) {
    Fields tf(*t, "training");
    tf.read("learning_rate", c.training.adam.learning_rate);
    tf.read("beta1", c.training.adam.beta1);
    tf.read("beta2", c.training.adam.beta2);
    tf.read("epsilon", c.training.adam.epsilon);
    tf.read("clip_norm", c.training.adam.clip_norm);
    tf.read("batch_size", c.training.batch_size);
    tf.read("epochs", c.training.epochs);
    tf.read("lambda", c.training.lambda);
    tf.finish();
  }
  if (const json* w = f.sub("word2vec")) {
    Fields wf(*w, "word2vec");
    wf.read("window", c.word2vec.window);
    wf.read("negatives", c.word2vec.negatives);
    wf.read("epochs", c.word2vec.epochs);
    wf.read("batch_size", c.word2vec.batch_size);
    wf.read("lr_start", c.word2vec.lr_start);
    wf.read("lr_end", c.word2vec.lr_end);
    wf.finish();
  }
  if (const json* r = f.sub("rejection")) {
    Fields rf(*r, "rejection");
    rf.read("enabled", c.rejection.enabled);
    rf.read("epochs", c.rejection.epochs);
    rf.read("learning_rate", c.rejection.learning_rate);
    rf.finish();
  }
  f.read("theta", c.theta);
  f.read("seed", c.seed);
  std::string out;
  f.read("out", out);
  if (!out.empty()) c.out_dir = resolve(base_dir, out);
  f.read("jobs", c.jobs);
  f.finish();
  return c;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  return experiment_config_from_json(read_json_file(path), path.parent_path());
}

json experiment_config_to_json(const ExperimentConfig& c) {
  json classifier = classifier_config_to_json(c.classifier);
  classifier.erase("vocab_size");
  json data = {{"train", c.train_path.string()},
               {"language", language_name(c.language)}};
  if (c.test_path) data["test"] = c.test_path->string();
  const AdamConfig& a = c.training.adam;
  return {{"schema_version", kConfigSchemaVersion},
          {"model", model_kind_name(c.model)},
          {"data", data},
          {"vocab", {{"max_size", c.vocab_max_size}, {"min_freq", c.vocab_min_freq}}},
          {"classifier", classifier},
          {"training",
           {{"learning_rate", a.learning_rate}, {"beta1", a.beta1}, {"beta2", a.beta2},
            {"epsilon", a.epsilon}, {"clip_norm", a.clip_norm},
            {"batch_size", c.training.batch_size}, {"epochs", c.training.epochs},
            {"lambda", c.training.lambda}}},
          {"word2vec",
           {{"window", c.word2vec.window}, {"negatives", c.word2vec.negatives},
            {"epochs", c.word2vec.epochs}, {"batch_size", c.word2vec.batch_size},
            {"lr_start", c.word2vec.lr_start}, {"lr_end", c.word2vec.lr_end}}},
          {"rejection",
           {{"enabled", c.rejection.enabled}, {"epochs", c.rejection.epochs},
            {"learning_rate", c.rejection.learning_rate}}},
          {"theta", c.theta},
          {"seed", c.seed},
          {"out", c.out_dir.string()},
          {"jobs", c.jobs}};
}

// ---------------------------------------------------------------------------
// Vocabulary files

std::string format_vocab_file(const Vocabulary& vocab) {
  std::string out;
  for (const auto& t : vocab.tokens()) out += t + "\n";
  return out;
}

Vocabulary parse_vocab_file(const std::string& text) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    tokens.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return Vocabulary::from_tokens(std::move(tokens));
}

// ---------------------------------------------------------------------------
// train

TrainOutcome cmd_train(const ExperimentConfig& config, std::ostream& log, bool resume) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();

  DatasetSplit train_split = load_trac2(config.train_path, config.language);
  std::optional<DatasetSplit> test_split;
  if (config.test_path) test_split = load_trac2(*config.test_path, config.language);

  const fs::path ckpt_path = config.out_dir / "checkpoint.tlack";
  ClassifierConfig model_cfg = config.classifier;
  model_cfg.seed = config.seed;
  TrainConfig train_cfg = config.training;
  train_cfg.seed = config.seed;

  Vocabulary vocab = build_vocab(train_split, config.vocab_max_size, config.vocab_min_freq);
  model_cfg.vocab_size = vocab.size();
  const auto train_data = encode_dataset(vocab, train_split, model_cfg.max_len);

  std::unique_ptr<SequenceClassifier> model;
  std::vector<EpochRecord> trace;
  std::size_t start_epoch = 0;
  std::optional<OptimizerState> saved_optimizer;
  if (resume && fs::exists(ckpt_path)) {
    LoadedCheckpoint ck = load_checkpoint(ckpt_path);
    if (ck.vocab.content_hash() != vocab.content_hash())
      throw ArtifactError("checkpoint vocabulary " + ck.vocab.content_hash() +
                          " does not match the training data's " + vocab.content_hash());
    if (ck.model->kind() != config.model)
      throw ArtifactError("checkpoint holds a " +
                          std::string(model_kind_name(ck.model->kind())) + " model");
    model = std::move(ck.model);
    model->detach_rejection_head();
    trace = trace_from_json(ck.metadata.at("trace"));
    start_epoch = ck.epochs_completed;
    saved_optimizer = ck.optimizer;
    log << "resuming at epoch " << start_epoch << "\n";
  } else {
    model = make_classifier(config.model, model_cfg);
    if (auto* w2v = dynamic_cast<Word2VecClassifier*>(model.get())) {
      std::vector<TokenIds> corpus;
      for (const auto& e : train_data) corpus.push_back(e.tokens);
      Word2VecConfig wc = config.word2vec;
      wc.seed = config.seed;
      auto report = w2v->pretrain(corpus, vocab.counts(), wc);
      log << "word2vec pretraining: final mean pair loss "
          << report.epoch_mean_loss.back() << "\n";
    }
  }

  Adam adam(model->parameters(), train_cfg.adam);
  if (saved_optimizer) restore_optimizer(adam, *saved_optimizer);

  const json config_json = experiment_config_to_json(config);
  // Checkpoints stay independent of where the run lives: no paths, no jobs.
  json ckpt_config = config_json;
  ckpt_config.erase("out");
  ckpt_config.erase("jobs");
  ckpt_config["data"].erase("train");
  ckpt_config["data"].erase("test");
  ckpt_config["data"]["train_git_blob_hash"] = git_blob_hash(read_file(config.train_path));
  auto save = [&](std::size_t epochs_done) {
    save_checkpoint(ckpt_path, *model, vocab, epochs_done, &adam,
                    {{"trace", trace_json(trace)}, {"config", ckpt_config}});
  };

  train(*model, train_data, adam, train_cfg, start_epoch, [&](const EpochRecord& r) {
    trace.push_back(r);
    char line[160];
    std::snprintf(line, sizeof line,
                  "epoch %zu/%zu  cce %.6f  r_loss %.6f  combined %.6f\n", r.epoch,
                  train_cfg.epochs, r.mean.classification, r.mean.reconstruction,
                  r.mean.combined);
    log << line;
    save(r.epoch);
  });

  if (config.rejection.enabled) {
    FeatureMatrix features = features_dataset(*model, train_data, config.jobs);
    std::vector<std::size_t> labels;
    for (const auto& e : train_data) labels.push_back(e.label);
    WisdomNetTraining head =
        wisdomnet_train(features, labels, model_cfg.num_classes, config.rejection.epochs,
                        config.rejection.learning_rate, mix_seed(config.seed, 0x5e1ec7),
                        config.theta);
    model->attach_rejection_head(std::move(head.head));
    log << "rejection head trained, final loss " << head.loss_per_epoch.back() << "\n";
  }
  save(train_cfg.epochs);

  TrainOutcome out;
  out.checkpoint = ckpt_path;
  out.trace = trace;
  out.final_train = score_dataset(*model, train_data, train_cfg.lambda, config.jobs);
  const auto eval_data =
      test_split ? encode_dataset(vocab, *test_split, model_cfg.max_len) : train_data;
  out.evaluation = evaluate_model(*model, eval_data, config.theta, Averaging::kWeighted,
                                  config.jobs);

  write_file_atomic(config.out_dir / "loss_trace.csv", trace_csv(trace));
  write_file_atomic(config.out_dir / "vocab.txt", format_vocab_file(vocab));
  json inputs = json::array({input_entry(config.train_path)});
  if (config.test_path) inputs.push_back(input_entry(*config.test_path));
  json manifest = {
      {"command", "train"},
      {"config", config_json},
      {"inputs", inputs},
      {"vocab_hash", vocab.content_hash()},
      {"checkpoint", {{"path", ckpt_path.filename().string()},
                      {"git_blob_hash", git_blob_hash(read_file(ckpt_path))}}},
      {"loss_trace", trace_json(trace)},
      {"final_train", {{"accuracy", out.final_train.accuracy},
                       {"classification", out.final_train.loss.classification},
                       {"reconstruction", out.final_train.loss.reconstruction},
                       {"combined", out.final_train.loss.combined}}},
      {"evaluation", {{"set", test_split ? "test" : "train"},
                      {"theta", config.theta},
                      {"report", report_json(out.evaluation)}}},
      {"wall_clock_seconds", seconds_since(start)}};
  out.manifest = config.out_dir / "manifest.json";
  write_file_atomic(out.manifest, manifest.dump(2) + "\n");
  log << "final training accuracy " << out.final_train.accuracy << ", combined loss "
      << out.final_train.loss.combined << "\n";
  return out;
}

// ---------------------------------------------------------------------------
// evaluate

EvaluateOutcome cmd_evaluate(const EvaluateOptions& options, std::ostream& log) {
  if (options.theta && !(*options.theta >= 0 && *options.theta <= 1))
    throw ConfigError("theta: must lie in [0, 1]");
  if (options.jobs < 1) throw ConfigError("jobs: must be >= 1");
  LoadedCheckpoint ck = load_checkpoint(options.checkpoint);
  if (options.vocab) {
    Vocabulary used = parse_vocab_file(read_file(*options.vocab));
    if (used.content_hash() != ck.vocab.content_hash())
      throw ArtifactError("vocabulary " + options.vocab->string() + " has hash " +
                          used.content_hash() + ", checkpoint expects " +
                          ck.vocab.content_hash());
  }
  DatasetSplit split = load_trac2(options.dataset, options.language);
  const auto data = encode_dataset(ck.vocab, split, ck.model->config().max_len);

  double theta = 0.5;
  if (options.theta) theta = *options.theta;
  else if (ck.model->rejection_head()) theta = ck.model->rejection_head()->threshold;

  EvaluateOutcome out;
  out.report = evaluate_model(*ck.model, data, theta, options.averaging, options.jobs);
  const std::string label = options.model_label.empty()
                                ? std::string(model_kind_name(ck.model->kind()))
                                : options.model_label;
  const std::vector<ResultRow> rows = {
      {label, std::string(language_name(options.language)), out.report}};
  write_file_atomic(options.out_dir / "report.csv", emit_results_table(rows, TableFormat::kCsv));
  write_file_atomic(options.out_dir / "report.json",
                    emit_results_table(rows, TableFormat::kJson));
  const std::string text = emit_results_table(rows, TableFormat::kText);
  write_file_atomic(options.out_dir / "report.txt", text);
  log << text;

  if (options.sweep_intervals) {
    const auto grid = uniform_threshold_grid(*options.sweep_intervals);
    std::vector<std::size_t> labels;
    for (const auto& e : data) labels.push_back(e.label);
    if (ck.model->rejection_head()) {
      out.sweep = threshold_sweep(*ck.model->rejection_head(),
                                  features_dataset(*ck.model, data, options.jobs), labels,
                                  grid);
    } else {
      out.sweep = threshold_sweep(probabilities_dataset(*ck.model, data, options.jobs),
                                  labels, grid);
    }
    std::string csv = "threshold,coverage,accuracy\n";
    for (const auto& p : out.sweep)
      csv += format_double(p.threshold) + "," + format_double(p.coverage) + "," +
             format_double(p.accuracy) + "\n";
    write_file_atomic(options.out_dir / "sweep.csv", csv);
    log << "threshold sweep: " << out.sweep.size() << " points written to sweep.csv\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// augment

void AugmentConfig::validate() const {
  noise.validate();
  if (raw_dir.empty() || !fs::is_directory(raw_dir))
    throw ConfigError("raw_dir: no such directory " + raw_dir.string());
  if (dictionary && !fs::exists(*dictionary))
    throw ConfigError("translator.dictionary: no such file " + dictionary->string());
  if (use_http && dictionary)
    throw ConfigError("translator: choose either a dictionary or http");
  if (!semi_noisy && !fully_translated)
    throw ConfigError("corpora: nothing to build");
  if (jobs < 1) throw ConfigError("jobs: must be >= 1");
}

AugmentConfig augment_config_from_json(const json& j, const fs::path& base_dir) {
  AugmentConfig c;
  Fields f(j, "");
  check_schema(f);
  std::string raw, out;
  f.read("raw_dir", raw);
  if (!raw.empty()) c.raw_dir = resolve(base_dir, raw);
  if (const json* t = f.sub("translator")) {
    Fields tf(*t, "translator");
    std::string kind = "mock", dictionary;
    tf.read("kind", kind);
    tf.read("dictionary", dictionary);
    tf.finish();
    if (kind == "http") c.use_http = true;
    else if (kind != "mock") throw ConfigError("translator.kind: must be mock or http");
    if (!dictionary.empty()) c.dictionary = resolve(base_dir, dictionary);
  }
  if (const json* n = f.sub("noise")) {
    Fields nf(*n, "noise");
    nf.read("probability", c.noise.probability);
    nf.read("swap", c.noise.swap);
    nf.read("delete", c.noise.remove);
    nf.read("duplicate", c.noise.duplicate);
    nf.finish();
  }
  if (const json* k = f.sub("corpora")) {
    c.semi_noisy = c.fully_translated = false;
    if (!k->is_array()) throw ConfigError("corpora: must be a list");
    for (const auto& name : *k) {
      if (name == "semi-noisy") c.semi_noisy = true;
      else if (name == "fully-translated") c.fully_translated = true;
      else throw ConfigError("corpora: unknown corpus " + name.dump());
    }
  }
  f.read("seed", c.seed);
  f.read("out", out);
  if (!out.empty()) c.out_dir = resolve(base_dir, out);
  f.read("jobs", c.jobs);
  f.finish();
  return c;
}

AugmentConfig load_augment_config(const fs::path& path) {
  return augment_config_from_json(read_json_file(path), path.parent_path());
}

ReconciliationReport cmd_augment(const AugmentConfig& config, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  std::unique_ptr<TranslatorClient> client;
  if (config.use_http) {
    auto http = HttpTranslatorConfig::from_env();
    if (!http) throw ConfigError("translator: http selected but TLA_TRANSLATE_URL is unset");
    client = std::make_unique<HttpTranslator>(*http);
  } else if (config.dictionary) {
    client = std::make_unique<OfflineMock>(OfflineMock::load(*config.dictionary));
  } else {
    client = std::make_unique<OfflineMock>();
  }

  Corpus raw = load_corpus(config.raw_dir);
  json inputs = json::array();
  for (Language l : kLanguages)
    for (const char* set : {"_train.csv", "_test.csv"})
      inputs.push_back(input_entry(config.raw_dir / (std::string(language_name(l)) + set)));

  Corpus semi;
  if (config.semi_noisy) {
    NoiseSpec noise = config.noise;
    noise.seed = config.seed;
    const AugmentationTargets targets = published_targets();
    auto pool = build_augmentation_pool(raw, *client, targets, noise, config.jobs);
    semi = build_semi_noisy(raw, pool, targets);
    write_corpus(config.out_dir / "semi_noisy", semi);
    for (const auto& [l, s] : semi) {
      const auto p = s.train.provenance_counts();
      log << language_name(l) << " semi-noisy training: " << s.train.counts[0] << "/"
          << s.train.counts[1] << "/" << s.train.counts[2] << " (raw " << p[0] << ", noise "
          << p[1] << ", translated " << p[2] << ")\n";
    }
  }
  std::optional<DatasetSplit> full;
  if (config.fully_translated) {
    full = build_fully_translated(raw, *client, config.jobs);
    write_file_atomic(config.out_dir / "fully_translated" / "english_train.csv",
                      format_trac2(*full));
    log << "fully translated English training: " << full->counts[0] << "/"
        << full->counts[1] << "/" << full->counts[2] << "\n";
  }

  ReconciliationReport report = reconcile(semi, full ? &*full : nullptr);
  write_file_atomic(config.out_dir / "reconciliation.json", report.to_json().dump(2) + "\n");
  write_file_atomic(config.out_dir / "reconciliation.txt", report.to_text());
  for (const auto& r : report.flagged())
    log << "reconciliation: " << r.corpus << " " << r.set << " " << r.label << ": "
        << r.note << "\n";

  json manifest = {{"command", "augment"},
                   {"translator", client->name()},
                   {"seed", config.seed},
                   {"noise", {{"probability", config.noise.probability},
                              {"swap", config.noise.swap},
                              {"delete", config.noise.remove},
                              {"duplicate", config.noise.duplicate}}},
                   {"inputs", inputs},
                   {"flagged", report.flagged().size()},
                   {"wall_clock_seconds", seconds_since(start)}};
  write_file_atomic(config.out_dir / "manifest.json", manifest.dump(2) + "\n");
  return report;
}

// ---------------------------------------------------------------------------
// gradcheck

bool GradCheckReport::passed() const {
  for (const auto& e : entries)
    if (!e.passed()) return false;
  return !entries.empty();
}

GradCheckReport cmd_gradcheck(const std::vector<GradScope>& scopes,
                              const GradSuiteOptions& options, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  GradCheckReport report;
  for (GradScope scope : scopes) {
    for (auto& e : run_gradcheck_suite(scope, options)) {
      char line[200];
      std::snprintf(line, sizeof line, "%-6s %-32s max rel err %.3e  tol %.0e  %s\n",
                    e.scope.c_str(), e.name.c_str(), e.result.max_rel_error, e.tolerance,
                    e.passed() ? "ok" : "FAIL");
      log << line;
      report.entries.push_back(std::move(e));
    }
  }
  report.seconds = seconds_since(start);
  const GradCheckEntry* worst = nullptr;
  for (const auto& e : report.entries) {
    if (e.passed()) continue;
    if (!worst || e.result.max_rel_error / e.tolerance >
                      worst->result.max_rel_error / worst->tolerance)
      worst = &e;
  }
  if (worst) {
    log << "worst offender: " << worst->scope << "/" << worst->name << " tensor '"
        << worst->result.worst_tensor << "' entry " << worst->result.worst_index
        << " analytic " << worst->result.worst_analytic << " numeric "
        << worst->result.worst_numeric << "\n";
  }
  log << report.entries.size() << " checks in " << report.seconds << " s\n";
  return report;
}

// ---------------------------------------------------------------------------
// demo-recurrence and fixtures

void cmd_demo_recurrence(double weight, double initial, std::size_t steps,
                         std::ostream& out) {
  const ScalarRecurrence r{weight, initial, steps};
  const auto traj = recurrence_trajectory(r);
  char line[64];
  for (std::size_t i = 0; i < traj.size(); ++i) {
    std::snprintf(line, sizeof line, "x_%zu = %.17g\n", i, traj[i]);
    out << line;
  }
  out << "regime: " << regime_name(classify_regime(weight)) << "\n";
}

void cmd_make_fixture(const std::string& kind, const fs::path& out_dir, std::uint64_t seed) {
  if (kind == "table") {
    write_table_fixture(out_dir, seed);
  } else if (kind == "synthetic") {
    write_file_atomic(out_dir / "train.csv", format_trac2(synthetic_corpus(20, seed)));
  } else {
    throw ConfigError("fixture kind must be table or synthetic");
  }
}

}  // namespace tla
