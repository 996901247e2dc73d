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

#include "tla/trainer.h"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "tla/errors.h"
#include "tla/losses.h"
#include "tla/ops.h"
#include "tla/rng.h"

namespace tla {

StepLosses train_step(SequenceClassifier& model,
                      std::span<const EncodedExample> batch, Adam& optimizer,
                      double lambda, std::uint64_t seed,
                      std::size_t step_index) {
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (batch.empty()) throw DomainError("training batch is empty");
  Tape tape;
  Tensor total;
  StepLosses sums;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    ForwardResult r = model.forward(tape, batch[i].tokens,
                                    {true, mix_seed(seed, i)});
    Tensor loss = cce(tape, r.probs, batch[i].label);
    sums.classification += loss.item();
    if (r.reconstruction_loss.defined()) {
      sums.reconstruction += r.reconstruction_loss.item();
      if (lambda > 0.0)
        loss = add(tape, loss, scale(tape, r.reconstruction_loss, lambda));
    }
    total = total.defined() ? add(tape, total, loss) : loss;
  }
  const double n = static_cast<double>(batch.size());
  Tensor mean = scale(tape, total, 1.0 / n);
  StepLosses out{sums.classification / n, sums.reconstruction / n, 0.0};
  out.combined = out.classification + lambda * out.reconstruction;
  if (!std::isfinite(mean.item())) {
    throw TrainingError("non-finite loss at step " + std::to_string(step_index));
  }
  ParameterList params = optimizer.params();
  zero_grads(params);
  tape.backward(mean);
  try {
    optimizer.step();
  } catch (const TrainingError& e) {
    throw TrainingError(std::string(e.what()) + " at step " +
                        std::to_string(step_index));
  }
  zero_grads(params);
  return out;
}

std::vector<EpochRecord> train(
    SequenceClassifier& model, const std::vector<EncodedExample>& data,
    Adam& optimizer, const TrainConfig& config, std::size_t start_epoch,
    const std::function<void(const EpochRecord&)>& on_epoch) {
  if (data.empty()) throw DomainError("training data is empty");
  if (config.batch_size == 0) throw ConfigError("batch_size must be >= 1");
  std::vector<EpochRecord> records;
  std::vector<std::size_t> order(data.size());
  std::vector<EncodedExample> batch;
  for (std::size_t epoch = start_epoch; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng rng(mix_seed(config.seed, 2 * epoch));
    rng.shuffle(order.begin(), order.end());
    EpochRecord rec;
    rec.epoch = epoch + 1;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(data[order[i]]);
      const std::uint64_t step_seed =
          mix_seed(mix_seed(config.seed, 2 * epoch + 1), batch_index);
      StepLosses s = train_step(model, batch, optimizer, config.lambda,
                                step_seed, optimizer.steps_taken());
      const double w = static_cast<double>(batch.size());
      rec.mean.classification += w * s.classification;
      rec.mean.reconstruction += w * s.reconstruction;
      rec.mean.combined += w * s.combined;
    }
    const double n = static_cast<double>(data.size());
    rec.mean.classification /= n;
    rec.mean.reconstruction /= n;
    rec.mean.combined /= n;
    records.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  return records;
}

void parallel_for(std::size_t n, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (std::size_t j = 0; j < jobs; ++j) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

namespace {

std::vector<ModelOutput> outputs(const SequenceClassifier& model,
                                 const std::vector<EncodedExample>& data,
                                 std::optional<double> threshold,
                                 std::size_t jobs) {
  std::vector<ModelOutput> out(data.size());
  parallel_for(data.size(), jobs, [&](std::size_t i) {
    out[i] = model.predict(data[i].tokens, threshold);
  });
  return out;
}

std::size_t argmax(const std::vector<double>& p) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < p.size(); ++k)
    if (p[k] > p[best]) best = k;
  return best;
}

}  // namespace

DatasetScore score_dataset(const SequenceClassifier& model,
                           const std::vector<EncodedExample>& data,
                           double lambda, std::size_t jobs) {
  DatasetScore score;
  if (data.empty()) return score;
  std::vector<ModelOutput> outs = outputs(model, data, std::nullopt, jobs);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double p = std::max(outs[i].probabilities[data[i].label], kProbabilityFloor);
    score.loss.classification += -std::log(p);
    score.loss.reconstruction += outs[i].reconstruction_loss.value_or(0.0);
    if (argmax(outs[i].probabilities) == data[i].label) ++correct;
  }
  const double n = static_cast<double>(data.size());
  score.loss.classification /= n;
  score.loss.reconstruction /= n;
  score.loss.combined = score.loss.classification + lambda * score.loss.reconstruction;
  score.accuracy = static_cast<double>(correct) / n;
  return score;
}

std::vector<Classification> predict_dataset(const SequenceClassifier& model,
                                            const std::vector<EncodedExample>& data,
                                            double threshold, std::size_t jobs) {
  std::vector<ModelOutput> outs = outputs(model, data, threshold, jobs);
  std::vector<Classification> preds;
  preds.reserve(outs.size());
  for (const ModelOutput& o : outs) preds.push_back(*o.decision);
  return preds;
}

std::vector<std::vector<double>> probabilities_dataset(
    const SequenceClassifier& model, const std::vector<EncodedExample>& data,
    std::size_t jobs) {
  std::vector<ModelOutput> outs = outputs(model, data, std::nullopt, jobs);
  std::vector<std::vector<double>> probs;
  probs.reserve(outs.size());
  for (ModelOutput& o : outs) probs.push_back(std::move(o.probabilities));
  return probs;
}

FeatureMatrix features_dataset(const SequenceClassifier& model,
                               const std::vector<EncodedExample>& data,
                               std::size_t jobs) {
  FeatureMatrix out(data.size());
  parallel_for(data.size(), jobs,
               [&](std::size_t i) { out[i] = model.features(data[i].tokens); });
  return out;
}

EvalReport evaluate_model(const SequenceClassifier& model,
                          const std::vector<EncodedExample>& data,
                          double threshold, Averaging scheme,
                          std::size_t jobs) {
  std::vector<Classification> preds = predict_dataset(model, data, threshold, jobs);
  std::vector<std::size_t> gold;
  gold.reserve(data.size());
  for (const EncodedExample& e : data) gold.push_back(e.label);
  return aggregate(confusion(preds, gold, model.config().num_classes), scheme);
}

}  // namespace tla
