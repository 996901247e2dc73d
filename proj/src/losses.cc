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

#include "tla/losses.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tla/errors.h"

namespace tla {

Tensor cce(Tape& tape, const Tensor& probs, std::size_t target) {
  if (probs.rank() != 1) {
    throw DimensionError("cce: probabilities must be rank 1, got " +
                         shape_string(probs.shape()));
  }
  if (target >= probs.numel()) {
    throw DomainError("cce: target class " + std::to_string(target) +
                      " out of range for " + std::to_string(probs.numel()) +
                      " classes");
  }
  const double p = probs.values()[target];
  const bool clipped = !(p > kProbabilityFloor);
  Tensor out = Tensor::scalar(-std::log(clipped ? kProbabilityFloor : p));
  if (tape.wants({&probs})) {
    out.set_requires_grad(true);
    tape.record({probs.id()}, out, [probs, out, target, clipped]() mutable {
      if (clipped) return;
      probs.grad()[target] -= out.grad()[0] / probs.values()[target];
    });
  }
  return out;
}

Tensor r_loss(Tape& tape, const Tensor& input, const Tensor& output) {
  if (input.shape() != output.shape()) {
    throw DimensionError("r_loss: input " + shape_string(input.shape()) +
                         " and reconstruction " + shape_string(output.shape()) +
                         " differ");
  }
  const std::size_t n = input.numel();
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = input.values()[i] - output.values()[i];
    total += d * d;
  }
  Tensor out = Tensor::scalar(total);
  if (tape.wants({&input, &output})) {
    out.set_requires_grad(true);
    tape.record({input.id(), output.id()}, out,
                [input, output, out, n]() mutable {
                  const double g = out.grad()[0];
                  for (std::size_t i = 0; i < n; ++i) {
                    const double d = input.values()[i] - output.values()[i];
                    if (input.requires_grad()) input.grad()[i] += 2.0 * d * g;
                    if (output.requires_grad()) output.grad()[i] -= 2.0 * d * g;
                  }
                });
  }
  return out;
}

Tensor bce(Tape& tape, const Tensor& probs, std::span<const double> targets) {
  const std::size_t n = probs.numel();
  if (targets.size() != n) {
    throw DimensionError("bce: " + std::to_string(n) + " probabilities for " +
                         std::to_string(targets.size()) + " targets");
  }
  if (n == 0) throw DomainError("bce of an empty tensor");
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = std::clamp(probs.values()[i], kProbabilityFloor,
                                1.0 - kProbabilityFloor);
    const double y = targets[i];
    total -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
  }
  Tensor out = Tensor::scalar(total / static_cast<double>(n));
  if (tape.wants({&probs})) {
    out.set_requires_grad(true);
    std::vector<double> y(targets.begin(), targets.end());
    tape.record({probs.id()}, out, [probs, out, y, n]() mutable {
      const double g = out.grad()[0] / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double p = probs.values()[i];
        if (!(p > kProbabilityFloor) || !(p < 1.0 - kProbabilityFloor)) continue;
        probs.grad()[i] += g * (-y[i] / p + (1.0 - y[i]) / (1.0 - p));
      }
    });
  }
  return out;
}

}  // namespace tla
