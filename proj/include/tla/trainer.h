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

#ifndef TLA_TRAINER_H_
#define TLA_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tla/metrics.h"
#include "tla/models.h"
#include "tla/optim.h"
#include "tla/text.h"

namespace tla {

struct StepLosses {
  double classification = 0.0;  // mean CCE over the batch
  double reconstruction = 0.0;  // mean R_loss over the batch (0 if none)
  double combined = 0.0;        // classification + lambda * reconstruction
};

// One optimizer step on mean(CCE + lambda * R_loss) over the batch.
// Dropout masks derive from `seed`. A non-finite loss throws TrainingError
// reporting `step_index`.
StepLosses train_step(SequenceClassifier& model,
                      std::span<const EncodedExample> batch, Adam& optimizer,
                      double lambda, std::uint64_t seed, std::size_t step_index);

struct TrainConfig {
  AdamConfig adam;
  std::size_t batch_size = 32;
  std::size_t epochs = 50;
  double lambda = 0.5;
  std::uint64_t seed = 0;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  StepLosses mean;        // example-weighted mean of the epoch's steps
};

// Runs epochs [start_epoch, config.epochs). Each epoch shuffles the data
// with a stream derived from (seed, epoch). The callback sees each finished
// epoch's record.
std::vector<EpochRecord> train(
    SequenceClassifier& model, const std::vector<EncodedExample>& data,
    Adam& optimizer, const TrainConfig& config, std::size_t start_epoch = 0,
    const std::function<void(const EpochRecord&)>& on_epoch = {});

// Inference-mode losses and accuracy over a dataset.
struct DatasetScore {
  StepLosses loss;
  double accuracy = 0.0;
};

DatasetScore score_dataset(const SequenceClassifier& model,
                           const std::vector<EncodedExample>& data,
                           double lambda, std::size_t jobs = 1);

// Predictions at `threshold` (rejection head used when attached).
std::vector<Classification> predict_dataset(
    const SequenceClassifier& model, const std::vector<EncodedExample>& data,
    double threshold, std::size_t jobs = 1);

// Class probabilities per example.
std::vector<std::vector<double>> probabilities_dataset(
    const SequenceClassifier& model, const std::vector<EncodedExample>& data,
    std::size_t jobs = 1);

FeatureMatrix features_dataset(const SequenceClassifier& model,
                               const std::vector<EncodedExample>& data,
                               std::size_t jobs = 1);

EvalReport evaluate_model(const SequenceClassifier& model,
                          const std::vector<EncodedExample>& data,
                          double threshold, Averaging scheme,
                          std::size_t jobs = 1);

// Calls fn(i) for i in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn);

}  // namespace tla

#endif  // TLA_TRAINER_H_
