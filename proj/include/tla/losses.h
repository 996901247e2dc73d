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

#ifndef TLA_LOSSES_H_
#define TLA_LOSSES_H_

#include <cstddef>
#include <span>

#include "tla/tensor.h"

namespace tla {

// Probabilities are clipped to this floor before taking logs.
inline constexpr double kProbabilityFloor = 1e-12;

// Categorical cross-entropy -ln(max(probs[target], floor)) of one
// distribution against a class index.
Tensor cce(Tape& tape, const Tensor& probs, std::size_t target);

// Reconstruction loss: sum over steps and features of (I - O)^2 for
// equally shaped [T, D] sequences.
Tensor r_loss(Tape& tape, const Tensor& input, const Tensor& output);

// Mean binary cross-entropy of elementwise probabilities against {0,1}
// targets; probabilities are clipped into [floor, 1 - floor].
Tensor bce(Tape& tape, const Tensor& probs, std::span<const double> targets);

}  // namespace tla

#endif  // TLA_LOSSES_H_
