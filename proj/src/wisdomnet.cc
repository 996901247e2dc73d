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

#include "tla/wisdomnet.h"

#include <cmath>

#include "tla/errors.h"
#include "tla/layers.h"
#include "tla/losses.h"
#include "tla/ops.h"
#include "tla/rng.h"

namespace tla {

std::size_t Classification::label() const {
  if (!label_) throw ContractError("label() of a rejected classification");
  return *label_;
}

std::string Classification::to_string() const {
  return label_ ? std::to_string(*label_) : std::string("rejected");
}

WisdomNetHead WisdomNetHead::init(std::size_t num_classes,
                                  std::size_t feature_dim, std::uint64_t seed,
                                  double threshold) {
  if (num_classes < 2) throw ConfigError("WisdomNet head needs >= 2 classes");
  if (feature_dim == 0) throw ConfigError("WisdomNet head needs features");
  Rng rng(seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(feature_dim));
  WisdomNetHead head;
  head.weights = uniform_parameter({num_classes, feature_dim}, bound, rng);
  head.bias = uniform_parameter({num_classes}, bound, rng);
  head.threshold = threshold;
  head.validate();
  return head;
}

void WisdomNetHead::validate() const {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ConfigError("rejection threshold must lie in [0, 1], got " +
                      std::to_string(threshold));
  }
  if (weights.rank() != 2 || bias.shape() != Shape{weights.dim(0)}) {
    throw DimensionError("WisdomNet head weights " +
                         shape_string(weights.shape()) + " and bias " +
                         shape_string(bias.shape()) + " disagree");
  }
}

void WisdomNetHead::append_to(ParameterList& out,
                              const std::string& prefix) const {
  out.push_back({prefix + "W", weights});
  out.push_back({prefix + "b", bias});
}

namespace {

void check_training_inputs(const FeatureMatrix& data,
                           std::span<const std::size_t> labels,
                           std::size_t num_classes, std::size_t feature_dim) {
  if (data.empty()) throw DomainError("WisdomNet training data is empty");
  if (data.size() != labels.size()) {
    throw DimensionError("WisdomNet training: " + std::to_string(data.size()) +
                         " points but " + std::to_string(labels.size()) +
                         " labels");
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].size() != feature_dim) {
      throw DimensionError("WisdomNet training point " + std::to_string(i) +
                           " has width " + std::to_string(data[i].size()) +
                           ", expected " + std::to_string(feature_dim));
    }
    if (labels[i] >= num_classes) {
      throw DomainError("WisdomNet label " + std::to_string(labels[i]) +
                        " out of range for " + std::to_string(num_classes) +
                        " classes");
    }
  }
}

// One full-batch gradient step on the mean cross-entropy over `rows`;
// returns the loss before the update.
double descend(WisdomNetHead& head, const FeatureMatrix& data,
               std::span<const std::size_t> labels,
               std::span<const std::size_t> rows, double learning_rate) {
  Tape tape;
  Tensor total;
  for (std::size_t i : rows) {
    Tensor x = Tensor::vector(data[i]);
    Tensor probs = softmax(tape, linear(tape, head.weights, x, head.bias));
    Tensor loss = cce(tape, probs, labels[i]);
    total = total.defined() ? add(tape, total, loss) : loss;
  }
  Tensor mean = scale(tape, total, 1.0 / static_cast<double>(rows.size()));
  head.weights.zero_grad();
  head.bias.zero_grad();
  tape.backward(mean);
  for (Tensor* t : {&head.weights, &head.bias}) {
    auto w = t->values();
    auto g = t->grad();
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (!std::isfinite(g[k])) {
        throw TrainingError("non-finite gradient in WisdomNet head");
      }
      w[k] -= learning_rate * g[k];
    }
    t->zero_grad();
  }
  return mean.item();
}

}  // namespace

WisdomNetTraining wisdomnet_train(const FeatureMatrix& data,
                                  std::span<const std::size_t> labels,
                                  std::size_t num_classes, std::size_t epochs,
                                  double learning_rate, std::uint64_t seed,
                                  double threshold) {
  if (epochs == 0) throw DomainError("WisdomNet training needs epochs >= 1");
  if (data.empty()) throw DomainError("WisdomNet training data is empty");
  WisdomNetTraining out{
      WisdomNetHead::init(num_classes, data.front().size(), seed, threshold),
      {}};
  check_training_inputs(data, labels, num_classes, data.front().size());
  std::vector<std::size_t> rows(data.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  for (std::size_t e = 0; e < epochs; ++e)
    out.loss_per_epoch.push_back(
        descend(out.head, data, labels, rows, learning_rate));
  return out;
}

std::vector<double> wisdomnet_refine(WisdomNetHead& head,
                                     const FeatureMatrix& data,
                                     std::span<const std::size_t> labels,
                                     std::size_t epochs, double learning_rate) {
  check_training_inputs(data, labels, head.num_classes(), head.feature_dim());
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < data.size(); ++i) {
    rows.push_back(i);
    if (wisdomnet_classify(head, data[i], 0.0).label() != labels[i])
      rows.push_back(i);
  }
  std::vector<double> losses;
  for (std::size_t e = 0; e < epochs; ++e)
    losses.push_back(descend(head, data, labels, rows, learning_rate));
  return losses;
}

std::vector<double> wisdomnet_probabilities(const WisdomNetHead& head,
                                            std::span<const double> x) {
  if (x.size() != head.feature_dim()) {
    throw DimensionError("WisdomNet input width " + std::to_string(x.size()) +
                         " does not match head width " +
                         std::to_string(head.feature_dim()));
  }
  Tape tape(Tape::Mode::kInference);
  Tensor in = Tensor::vector(std::vector<double>(x.begin(), x.end()));
  Tensor probs = softmax(tape, linear(tape, head.weights, in, head.bias));
  return {probs.values().begin(), probs.values().end()};
}

Classification classify_probabilities(std::span<const double> probs,
                                      double threshold) {
  if (probs.empty()) throw DomainError("classification of an empty distribution");
  std::size_t best = 0;
  for (std::size_t k = 1; k < probs.size(); ++k)
    if (probs[k] > probs[best]) best = k;
  if (probs[best] < threshold) return Classification::rejected();
  return Classification::of(best);
}

Classification wisdomnet_classify(const WisdomNetHead& head,
                                  std::span<const double> x, double threshold) {
  return classify_probabilities(wisdomnet_probabilities(head, x), threshold);
}

std::vector<Classification> wisdomnet(const FeatureMatrix& data,
                                      std::span<const std::size_t> labels,
                                      std::size_t num_classes,
                                      std::size_t epochs, double learning_rate,
                                      double threshold, std::uint64_t seed) {
  WisdomNetTraining trained = wisdomnet_train(data, labels, num_classes, epochs,
                                              learning_rate, seed, threshold);
  std::vector<Classification> out;
  out.reserve(data.size());
  for (const auto& x : data)
    out.push_back(wisdomnet_classify(trained.head, x, threshold));
  return out;
}

std::vector<SweepPoint> threshold_sweep(
    const std::vector<std::vector<double>>& probabilities,
    std::span<const std::size_t> labels, std::span<const double> grid) {
  if (grid.empty()) throw DomainError("threshold sweep needs a non-empty grid");
  if (probabilities.size() != labels.size()) {
    throw DimensionError("threshold sweep: " +
                         std::to_string(probabilities.size()) +
                         " predictions for " + std::to_string(labels.size()) +
                         " labels");
  }
  std::vector<SweepPoint> out;
  for (double theta : grid) {
    if (!(theta >= 0.0 && theta <= 1.0)) {
      throw DomainError("threshold " + std::to_string(theta) +
                        " outside [0, 1]");
    }
    std::size_t accepted = 0, correct = 0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
      Classification c = classify_probabilities(probabilities[i], theta);
      if (c.is_rejected()) continue;
      ++accepted;
      if (c.label() == labels[i]) ++correct;
    }
    const double total = static_cast<double>(probabilities.size());
    out.push_back({theta, total > 0 ? accepted / total : 0.0,
                   accepted > 0 ? static_cast<double>(correct) / accepted : 0.0});
  }
  return out;
}

std::vector<SweepPoint> threshold_sweep(const WisdomNetHead& head,
                                        const FeatureMatrix& data,
                                        std::span<const std::size_t> labels,
                                        std::span<const double> grid) {
  std::vector<std::vector<double>> probs;
  probs.reserve(data.size());
  for (const auto& x : data) probs.push_back(wisdomnet_probabilities(head, x));
  return threshold_sweep(probs, labels, grid);
}

std::vector<double> uniform_threshold_grid(std::size_t intervals) {
  if (intervals == 0) throw DomainError("threshold grid needs >= 1 interval");
  std::vector<double> grid;
  for (std::size_t i = 0; i <= intervals; ++i)
    grid.push_back(static_cast<double>(i) / static_cast<double>(intervals));
  return grid;
}

}  // namespace tla
