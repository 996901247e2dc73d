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

#ifndef TLA_WISDOMNET_H_
#define TLA_WISDOMNET_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tla/tensor.h"

namespace tla {

// A predicted class index or the distinguished "rejected" outcome.
class Classification {
 public:
  static Classification rejected() { return Classification(); }
  static Classification of(std::size_t label) { return Classification(label); }

  bool is_rejected() const { return !label_.has_value(); }
  // Throws ContractError when rejected.
  std::size_t label() const;
  std::string to_string() const;

  friend bool operator==(const Classification&, const Classification&) = default;

 private:
  Classification() = default;
  explicit Classification(std::size_t label) : label_(label) {}
  std::optional<std::size_t> label_;
};

// Linear softmax head with a rejection threshold on the top probability.
struct WisdomNetHead {
  Tensor weights;  // [num_classes, feature_dim]
  Tensor bias;     // [num_classes]
  double threshold = 0.5;

  static WisdomNetHead init(std::size_t num_classes, std::size_t feature_dim,
                            std::uint64_t seed, double threshold = 0.5);
  std::size_t num_classes() const { return weights.dim(0); }
  std::size_t feature_dim() const { return weights.dim(1); }
  void validate() const;
  void append_to(ParameterList& out, const std::string& prefix) const;
};

using FeatureMatrix = std::vector<std::vector<double>>;

struct WisdomNetTraining {
  WisdomNetHead head;
  // Mean cross-entropy over the data before each epoch's update.
  std::vector<double> loss_per_epoch;
};

// Full-batch gradient descent on mean categorical cross-entropy, starting
// from random weights and bias. The threshold plays no part in training.
WisdomNetTraining wisdomnet_train(const FeatureMatrix& data,
                                  std::span<const std::size_t> labels,
                                  std::size_t num_classes, std::size_t epochs,
                                  double learning_rate, std::uint64_t seed,
                                  double threshold = 0.5);

// Continues training on the data with every currently misclassified example
// appearing twice.
std::vector<double> wisdomnet_refine(WisdomNetHead& head,
                                     const FeatureMatrix& data,
                                     std::span<const std::size_t> labels,
                                     std::size_t epochs, double learning_rate);

std::vector<double> wisdomnet_probabilities(const WisdomNetHead& head,
                                            std::span<const double> x);

// Decision rule: Rejected when max(probs) < threshold, otherwise the argmax
// with ties going to the lowest index.
Classification classify_probabilities(std::span<const double> probs,
                                      double threshold);

Classification wisdomnet_classify(const WisdomNetHead& head,
                                  std::span<const double> x, double threshold);

// Train, then classify every training point at `threshold`.
std::vector<Classification> wisdomnet(const FeatureMatrix& data,
                                      std::span<const std::size_t> labels,
                                      std::size_t num_classes,
                                      std::size_t epochs, double learning_rate,
                                      double threshold, std::uint64_t seed);

struct SweepPoint {
  double threshold = 0.0;
  double coverage = 0.0;
  // Accuracy over accepted samples; 0 when nothing is accepted.
  double accuracy = 0.0;
};

// Coverage and accepted-sample accuracy for each threshold in `grid`.
std::vector<SweepPoint> threshold_sweep(
    const std::vector<std::vector<double>>& probabilities,
    std::span<const std::size_t> labels, std::span<const double> grid);

std::vector<SweepPoint> threshold_sweep(const WisdomNetHead& head,
                                        const FeatureMatrix& data,
                                        std::span<const std::size_t> labels,
                                        std::span<const double> grid);

// 0.0, step, 2 step, ..., 1.0.
std::vector<double> uniform_threshold_grid(std::size_t intervals);

}  // namespace tla

#endif  // TLA_WISDOMNET_H_
