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

#ifndef TLA_GRADCHECK_H_
#define TLA_GRADCHECK_H_

#include <cstddef>
#include <functional>
#include <string>

#include "tla/tensor.h"

namespace tla {

struct GradCheckOptions {
  // Central-difference step.
  double step = 1e-5;
  // Relative error is |a - n| / max(|a|, |n|, floor); the floor keeps
  // entries whose true gradient is ~0 from dividing noise by noise.
  double floor = 1e-3;
  // Check at most this many entries per tensor (evenly strided); 0 = all.
  std::size_t max_entries_per_tensor = 0;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_tensor;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t entries_checked = 0;
};

// Builds a scalar loss on the given tape from the current parameter values.
using LossBuilder = std::function<Tensor(Tape&)>;

// Compares tape gradients of `loss` against central finite differences for
// every entry of every listed tensor. Gradients of `params` are cleared
// before and after.
GradCheckResult gradcheck(const LossBuilder& loss, ParameterList params,
                          const GradCheckOptions& options = {});

double relative_error(double analytic, double numeric, double floor);

}  // namespace tla

#endif  // TLA_GRADCHECK_H_
