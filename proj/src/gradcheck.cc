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

#include "tla/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <vector>

namespace tla {

double relative_error(double analytic, double numeric, double floor) {
  const double denom =
      std::max({std::fabs(analytic), std::fabs(numeric), floor});
  return std::fabs(analytic - numeric) / denom;
}

GradCheckResult gradcheck(const LossBuilder& loss, ParameterList params,
                          const GradCheckOptions& options) {
  zero_grads(params);
  {
    Tape tape;
    Tensor value = loss(tape);
    tape.backward(value);
  }
  std::vector<std::vector<double>> analytic;
  analytic.reserve(params.size());
  for (NamedTensor& p : params)
    analytic.emplace_back(p.tensor.grad().begin(), p.tensor.grad().end());
  zero_grads(params);

  auto evaluate = [&loss]() {
    Tape tape(Tape::Mode::kInference);
    return loss(tape).item();
  };

  GradCheckResult result;
  result.max_rel_error = -1.0;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor& t = params[k].tensor;
    const std::size_t n = t.numel();
    std::size_t stride = 1;
    if (options.max_entries_per_tensor > 0 && n > options.max_entries_per_tensor)
      stride = (n + options.max_entries_per_tensor - 1) /
               options.max_entries_per_tensor;
    for (std::size_t i = 0; i < n; i += stride) {
      double& slot = t.values()[i];
      const double saved = slot;
      slot = saved + options.step;
      const double plus = evaluate();
      slot = saved - options.step;
      const double minus = evaluate();
      slot = saved;
      const double numeric = (plus - minus) / (2.0 * options.step);
      const double err = relative_error(analytic[k][i], numeric, options.floor);
      ++result.entries_checked;
      if (!(err <= result.max_rel_error)) {
        result.max_rel_error = err;
        result.worst_tensor = params[k].name;
        result.worst_index = i;
        result.worst_analytic = analytic[k][i];
        result.worst_numeric = numeric;
      }
    }
  }
  if (result.max_rel_error < 0) result.max_rel_error = 0;
  return result;
}

}  // namespace tla
