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

#ifndef TLA_COMMANDS_H_
#define TLA_COMMANDS_H_

// Command implementations behind the `tla` executable. They live in the
// library so tests can drive them in-process.

#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tla/augmentation.h"
#include "tla/gradcheck_suite.h"
#include "tla/metrics.h"
#include "tla/models.h"
#include "tla/trainer.h"
#include "tla/wisdomnet.h"
#include "tla/word2vec.h"

namespace tla {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailure = 1,
  kExitConfigError = 2,
  kExitDivergence = 3,
  kExitArtifactError = 4,
};

// Maps the library's error classes onto exit codes.
int exit_code_for(const std::exception& e);

inline constexpr int kConfigSchemaVersion = 1;

struct RejectionSettings {
  bool enabled = false;
  std::size_t epochs = 100;
  double learning_rate = 0.1;
};

struct ExperimentConfig {
  ModelKind model = ModelKind::kTlaNet;
  std::filesystem::path train_path;
  std::optional<std::filesystem::path> test_path;
  Language language = Language::kEnglish;
  ClassifierConfig classifier;  // vocab_size is filled from the data
  std::size_t vocab_max_size = 20000;
  std::size_t vocab_min_freq = 1;
  TrainConfig training;  // adam lr 0.001, batch 32, 50 epochs by default
  Word2VecConfig word2vec;
  RejectionSettings rejection;
  double theta = 0.5;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "runs/latest";
  std::size_t jobs = 1;

  ExperimentConfig();
  // Throws ConfigError naming the field; checks that input paths exist.
  void validate() const;
};

// Relative paths resolve against `base_dir`. Missing keys keep defaults;
// unknown keys and a wrong schema_version throw ConfigError.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j,
                                             const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
nlohmann::json experiment_config_to_json(const ExperimentConfig& config);

struct TrainOutcome {
  std::filesystem::path checkpoint;
  std::filesystem::path manifest;
  std::vector<EpochRecord> trace;
  DatasetScore final_train;
  EvalReport evaluation;  // on the test set when given, else training
};

// Trains, checkpointing after every epoch, and writes into out_dir:
//   checkpoint.tlack, loss_trace.csv, vocab.txt, manifest.json
// With `resume`, an existing checkpoint.tlack continues from its epoch.
TrainOutcome cmd_train(const ExperimentConfig& config, std::ostream& log,
                       bool resume = false);

struct EvaluateOptions {
  std::filesystem::path checkpoint;
  std::filesystem::path dataset;
  Language language = Language::kEnglish;
  std::optional<double> theta;  // default: head threshold, else 0.5
  Averaging averaging = Averaging::kWeighted;
  std::string model_label;  // row label, default: model kind
  // Vocabulary file (one token per line) the caller encoded with; its hash
  // must match the checkpoint's.
  std::optional<std::filesystem::path> vocab;
  std::optional<std::size_t> sweep_intervals;
  std::filesystem::path out_dir = "runs/eval";
  std::size_t jobs = 1;
};

struct EvaluateOutcome {
  EvalReport report;
  std::vector<SweepPoint> sweep;
};

// Writes report.csv, report.json, report.txt (and sweep.csv) to out_dir.
EvaluateOutcome cmd_evaluate(const EvaluateOptions& options, std::ostream& log);

struct AugmentConfig {
  std::filesystem::path raw_dir;
  std::optional<std::filesystem::path> dictionary;  // offline mock
  bool use_http = false;  // HttpTranslator from TLA_TRANSLATE_URL/KEY
  NoiseSpec noise;
  bool semi_noisy = true;
  bool fully_translated = true;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "runs/augment";
  std::size_t jobs = 1;

  void validate() const;
};

AugmentConfig augment_config_from_json(const nlohmann::json& j,
                                       const std::filesystem::path& base_dir);
AugmentConfig load_augment_config(const std::filesystem::path& path);

// Writes semi_noisy/, fully_translated/, reconciliation.{json,txt} and
// manifest.json under out_dir.
ReconciliationReport cmd_augment(const AugmentConfig& config, std::ostream& log);

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double seconds = 0.0;
  bool passed() const;
};

GradCheckReport cmd_gradcheck(const std::vector<GradScope>& scopes,
                              const GradSuiteOptions& options, std::ostream& log);

// Prints x_0 .. x_n and the regime label.
void cmd_demo_recurrence(double weight, double initial, std::size_t steps,
                         std::ostream& out);

// kind "table": raw files with the published label distribution plus the
// offline dictionary. kind "synthetic": the 60-example training corpus.
void cmd_make_fixture(const std::string& kind, const std::filesystem::path& out_dir,
                      std::uint64_t seed);

// Vocabulary files: one token per line in id order.
std::string format_vocab_file(const Vocabulary& vocab);
Vocabulary parse_vocab_file(const std::string& text);

}  // namespace tla

#endif  // TLA_COMMANDS_H_
