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

#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "tla/errors.h"
#include "tla/rng.h"
#include "tla/wisdomnet.h"

namespace tla {
namespace {

FeatureMatrix random_points(std::size_t n, std::size_t dim, Rng& rng) {
  FeatureMatrix out(n, std::vector<double>(dim));
  for (auto& x : out)
    for (double& v : x) v = rng.uniform(-3, 3);
  return out;
}

std::size_t argmax(const std::vector<double>& p) {
  return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

TEST_CASE("worked decision examples") {
  const std::vector<double> confident = {0.9, 0.05, 0.05};
  const std::vector<double> unsure = {0.4, 0.3, 0.3};
  CHECK(classify_probabilities(confident, 0.5) == Classification::of(0));
  CHECK(classify_probabilities(unsure, 0.5) == Classification::rejected());
  CHECK(classify_probabilities(unsure, 0.5).is_rejected());
  CHECK_THROWS_AS(classify_probabilities(unsure, 0.5).label(), ContractError);
}

TEST_CASE("ties go to the lowest index") {
  const std::vector<double> tie = {0.25, 0.375, 0.375};
  CHECK(classify_probabilities(tie, 0.0) == Classification::of(1));
}

TEST_CASE("threshold zero is plain argmax on random heads") {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    WisdomNetHead head = WisdomNetHead::init(3, 4, rng.next());
    std::vector<double> x(4);
    for (double& v : x) v = rng.uniform(-5, 5);
    const auto p = wisdomnet_probabilities(head, x);
    Classification c = wisdomnet_classify(head, x, 0.0);
    REQUIRE_FALSE(c.is_rejected());
    CHECK(c.label() == argmax(p));
  }
}

TEST_CASE("rejection is monotone in the threshold") {
  Rng rng(9);
  WisdomNetHead head = WisdomNetHead::init(3, 5, 1);
  const auto grid = uniform_threshold_grid(50);
  for (const auto& x : random_points(200, 5, rng)) {
    bool rejected = false;
    for (double theta : grid) {
      const bool now = wisdomnet_classify(head, x, theta).is_rejected();
      if (rejected) CHECK(now);
      rejected = now;
    }
  }
}

TEST_CASE("argmax is invariant to a constant logit shift") {
  Rng rng(4);
  WisdomNetHead head = WisdomNetHead::init(3, 2, 8);
  WisdomNetHead shifted = WisdomNetHead::init(3, 2, 8);
  for (double& b : shifted.bias.values()) b += 17.25;
  for (const auto& x : random_points(300, 2, rng))
    CHECK(wisdomnet_classify(head, x, 0.0) == wisdomnet_classify(shifted, x, 0.0));
}

TEST_CASE("threshold at or below 1/C accepts everything") {
  Rng rng(77);
  WisdomNetHead head = WisdomNetHead::init(4, 3, 5);
  for (const auto& x : random_points(200, 3, rng))
    CHECK_FALSE(wisdomnet_classify(head, x, 0.25).is_rejected());
}

TEST_CASE("separable two-class toy reaches accuracy 1 within 200 epochs") {
  Rng rng(31);
  FeatureMatrix data;
  std::vector<std::size_t> labels;
  for (int i = 0; i < 40; ++i) {
    const std::size_t y = i % 2;
    const double sign = y == 0 ? -1.0 : 1.0;
    data.push_back({sign * rng.uniform(0.5, 2.0), rng.uniform(-1, 1)});
    labels.push_back(y);
  }
  WisdomNetTraining t = wisdomnet_train(data, labels, 2, 200, 0.5, 3);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (wisdomnet_classify(t.head, data[i], 0.0).label() == labels[i]) ++correct;
  CHECK(correct == data.size());
  CHECK(t.loss_per_epoch.size() == 200);
}

TEST_CASE("full algorithm classifies training points with rejection") {
  Rng rng(8);
  FeatureMatrix data = random_points(30, 3, rng);
  std::vector<std::size_t> labels;
  for (std::size_t i = 0; i < data.size(); ++i) labels.push_back(i % 3);
  auto out = wisdomnet(data, labels, 3, 5, 0.1, 0.9, 1);
  REQUIRE(out.size() == data.size());
  // An untrained-ish head on noise is rarely 90% sure.
  CHECK(std::count_if(out.begin(), out.end(),
                      [](const Classification& c) { return c.is_rejected(); }) > 0);
}

TEST_CASE("training preconditions") {
  FeatureMatrix data = {{1.0, 2.0}};
  std::vector<std::size_t> labels = {0};
  CHECK_THROWS_AS(wisdomnet_train(data, labels, 2, 0, 0.1, 1), DomainError);
  CHECK_THROWS_AS(wisdomnet_train({}, {}, 2, 5, 0.1, 1), DomainError);
  std::vector<std::size_t> bad = {2};
  CHECK_THROWS_AS(wisdomnet_train(data, bad, 2, 5, 0.1, 1), DomainError);
  WisdomNetHead head = WisdomNetHead::init(2, 2, 1);
  CHECK_THROWS_AS(wisdomnet_classify(head, std::vector<double>{1.0}, 0.5),
                  DimensionError);
  head.threshold = 1.5;
  CHECK_THROWS_AS(head.validate(), ConfigError);
}

TEST_CASE("loss is non-increasing on average for a small rate") {
  std::vector<double> mean_trace(30, 0.0);
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    Rng rng(seed);
    FeatureMatrix data = random_points(25, 3, rng);
    std::vector<std::size_t> labels;
    for (std::size_t i = 0; i < data.size(); ++i) labels.push_back(rng.below(3));
    auto t = wisdomnet_train(data, labels, 3, 30, 0.01, seed);
    for (std::size_t e = 0; e < 30; ++e) mean_trace[e] += t.loss_per_epoch[e];
  }
  for (std::size_t e = 1; e < mean_trace.size(); ++e)
    CHECK(mean_trace[e] <= mean_trace[e - 1]);
}

TEST_CASE("refinement with nothing misclassified is plain gradient descent") {
  FeatureMatrix data = {{2.0, 0.1}, {-2.0, 0.3}, {1.5, -0.2}, {-1.0, 0.0}};
  std::vector<std::size_t> labels = {1, 0, 1, 0};
  WisdomNetTraining t = wisdomnet_train(data, labels, 2, 300, 0.5, 2);
  for (std::size_t i = 0; i < data.size(); ++i)
    REQUIRE(wisdomnet_classify(t.head, data[i], 0.0).label() == labels[i]);

  // Oracle: one epoch of mean cross-entropy descent, gradient (p - y) x.
  std::vector<double> w(t.head.weights.values().begin(), t.head.weights.values().end());
  std::vector<double> b(t.head.bias.values().begin(), t.head.bias.values().end());
  std::vector<double> gw(w.size(), 0.0), gb(b.size(), 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    double z[2];
    for (int k = 0; k < 2; ++k)
      z[k] = w[k * 2] * data[i][0] + w[k * 2 + 1] * data[i][1] + b[k];
    const double m = std::max(z[0], z[1]);
    const double e0 = std::exp(z[0] - m), e1 = std::exp(z[1] - m);
    const double p[2] = {e0 / (e0 + e1), e1 / (e0 + e1)};
    for (int k = 0; k < 2; ++k) {
      const double d = (p[k] - (labels[i] == static_cast<std::size_t>(k) ? 1.0 : 0.0)) / 4.0;
      gw[k * 2] += d * data[i][0];
      gw[k * 2 + 1] += d * data[i][1];
      gb[k] += d;
    }
  }
  wisdomnet_refine(t.head, data, labels, 1, 0.5);
  for (std::size_t j = 0; j < w.size(); ++j)
    CHECK(t.head.weights.values()[j] == doctest::Approx(w[j] - 0.5 * gw[j]).epsilon(1e-12));
  for (std::size_t k = 0; k < b.size(); ++k)
    CHECK(t.head.bias.values()[k] == doctest::Approx(b[k] - 0.5 * gb[k]).epsilon(1e-12));
}

TEST_CASE("threshold sweep") {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    WisdomNetHead head = WisdomNetHead::init(3, 4, rng.next());
    FeatureMatrix data = random_points(100, 4, rng);
    std::vector<std::size_t> labels;
    for (std::size_t i = 0; i < data.size(); ++i) labels.push_back(rng.below(3));
    const auto grid = uniform_threshold_grid(20);
    auto sweep = threshold_sweep(head, data, labels, grid);
    REQUIRE(sweep.size() == grid.size());
    CHECK(sweep.front().coverage == 1.0);
    CHECK(sweep.back().coverage == 0.0);
    for (std::size_t i = 1; i < sweep.size(); ++i)
      CHECK(sweep[i].coverage <= sweep[i - 1].coverage);
  }
  CHECK_THROWS_AS(threshold_sweep(std::vector<std::vector<double>>{}, {},
                                  std::vector<double>{}),
                  DomainError);
}

}  // namespace
}  // namespace tla
