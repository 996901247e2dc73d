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

// tla: train, evaluate, augment, gradcheck and small demos.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tla/commands.h"
#include "tla/errors.h"

namespace {

using namespace tla;

int run(int argc, char** argv) {
  CLI::App app{"Code-mixed aggression classifiers with reject option"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "train a classifier from a JSON config");
  std::string train_config;
  std::optional<std::uint64_t> train_seed;
  std::optional<std::size_t> train_jobs;
  std::optional<double> train_theta;
  std::string train_out;
  bool resume = false;
  train->add_option("--config", train_config, "experiment config")->required();
  train->add_option("--seed", train_seed, "override the config seed");
  train->add_option("--jobs", train_jobs, "worker threads");
  train->add_option("--theta", train_theta, "rejection threshold for the evaluation");
  train->add_option("--out", train_out, "output directory");
  train->add_flag("--resume", resume, "continue from out/checkpoint.tlack");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "score a checkpoint on a dataset");
  EvaluateOptions eo;
  std::string eval_language = "english", averaging = "weighted";
  std::string eval_vocab, eval_out;
  std::optional<double> eval_theta;
  std::optional<std::size_t> sweep;
  eval->add_option("--checkpoint", eo.checkpoint, "checkpoint file")->required();
  eval->add_option("--data", eo.dataset, "TRAC-2 style CSV")->required();
  eval->add_option("--language", eval_language, "english, hindi or bangla");
  eval->add_option("--theta", eval_theta, "rejection threshold");
  eval->add_option("--averaging", averaging, "weighted or macro");
  eval->add_option("--label", eo.model_label, "row label in the report");
  eval->add_option("--vocab", eval_vocab, "vocabulary file the data was encoded with");
  eval->add_option("--sweep", sweep, "sweep theta over this many intervals of [0, 1]");
  eval->add_option("--jobs", eo.jobs, "worker threads");
  eval->add_option("--out", eval_out, "output directory");

  // augment
  auto* augment = app.add_subcommand("augment", "build the augmented corpora");
  std::string augment_config, augment_out;
  std::optional<std::uint64_t> augment_seed;
  std::optional<std::size_t> augment_jobs;
  augment->add_option("--config", augment_config, "augmentation config")->required();
  augment->add_option("--seed", augment_seed, "override the config seed");
  augment->add_option("--jobs", augment_jobs, "worker threads");
  augment->add_option("--out", augment_out, "output directory");

  // gradcheck
  auto* grad = app.add_subcommand("gradcheck", "finite-difference gradient checks");
  std::vector<std::string> scopes;
  GradSuiteOptions grad_options;
  grad->add_option("--scope", scopes, "ops, layers, models (default all)")
      ->check(CLI::IsMember({"ops", "layers", "models"}));
  grad->add_option("--seed", grad_options.seed, "input seed");
  grad->add_flag("--inject-fault", grad_options.inject_fault)->group("");

  // demo-recurrence
  auto* demo = app.add_subcommand("demo-recurrence", "iterate x_t = W x_{t-1}");
  double weight = 2.0, initial = 1.0;
  std::size_t steps = 10;
  demo->add_option("--weight", weight, "W");
  demo->add_option("--x0", initial, "initial value");
  demo->add_option("--steps", steps, "n");

  // make-fixture
  auto* fixture = app.add_subcommand("make-fixture", "write a synthetic dataset");
  std::string fixture_kind = "table", fixture_out;
  std::uint64_t fixture_seed = 0;
  fixture->add_option("--kind", fixture_kind, "table or synthetic")
      ->check(CLI::IsMember({"table", "synthetic"}));
  fixture->add_option("--out", fixture_out, "output directory")->required();
  fixture->add_option("--seed", fixture_seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  if (*train) {
    ExperimentConfig c = load_experiment_config(train_config);
    if (train_seed) c.seed = *train_seed;
    if (train_jobs) c.jobs = *train_jobs;
    if (train_theta) c.theta = *train_theta;
    if (!train_out.empty()) c.out_dir = train_out;
    const TrainOutcome out = cmd_train(c, std::cout, resume);
    std::cout << "wrote " << out.manifest.string() << "\n";
    return kExitOk;
  }
  if (*eval) {
    eo.language = parse_language(eval_language);
    eo.averaging = parse_averaging(averaging);
    eo.theta = eval_theta;
    eo.sweep_intervals = sweep;
    if (!eval_vocab.empty()) eo.vocab = eval_vocab;
    if (!eval_out.empty()) eo.out_dir = eval_out;
    cmd_evaluate(eo, std::cout);
    return kExitOk;
  }
  if (*augment) {
    AugmentConfig c = load_augment_config(augment_config);
    if (augment_seed) c.seed = *augment_seed;
    if (augment_jobs) c.jobs = *augment_jobs;
    if (!augment_out.empty()) c.out_dir = augment_out;
    cmd_augment(c, std::cout);
    return kExitOk;
  }
  if (*grad) {
    std::vector<GradScope> s;
    if (scopes.empty()) s = {GradScope::kOps, GradScope::kLayers, GradScope::kModels};
    for (const auto& name : scopes) s.push_back(parse_grad_scope(name));
    const GradCheckReport report = cmd_gradcheck(s, grad_options, std::cout);
    return report.passed() ? kExitOk : kExitCheckFailure;
  }
  if (*demo) {
    cmd_demo_recurrence(weight, initial, steps, std::cout);
    return kExitOk;
  }
  if (*fixture) {
    cmd_make_fixture(fixture_kind, fixture_out, fixture_seed);
    return kExitOk;
  }
  return kExitConfigError;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return tla::exit_code_for(e);
  }
}
