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

#ifndef TLA_OPTIM_H_
#define TLA_OPTIM_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tla/tensor.h"

namespace tla {

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Rescale the global gradient norm down to this value; 0 disables.
  double clip_norm = 0.0;
};

// Bias-corrected Adam over a fixed parameter list. Reads each parameter's
// accumulated gradient; does not clear it.
class Adam {
 public:
  Adam(ParameterList params, AdamConfig config);

  void step();

  std::uint64_t steps_taken() const { return t_; }
  const AdamConfig& config() const { return config_; }
  const ParameterList& params() const { return params_; }

  // Moment buffers, aligned with params(); exposed for checkpointing.
  std::vector<std::vector<double>>& first_moments() { return m_; }
  std::vector<std::vector<double>>& second_moments() { return v_; }
  const std::vector<std::vector<double>>& first_moments() const { return m_; }
  const std::vector<std::vector<double>>& second_moments() const { return v_; }
  void set_steps_taken(std::uint64_t t) { t_ = t; }

 private:
  ParameterList params_;
  AdamConfig config_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  std::uint64_t t_ = 0;
};

// rate(step) interpolates affinely from `start` at 0 to `end` at
// `total_steps`.
struct LinearDecaySchedule {
  double start = 0.025;
  double end = 0.001;
  std::size_t total_steps = 1;

  double rate(std::size_t step) const;
};

// params -= rate(step) * grad for every parameter.
void sgd_step(const LinearDecaySchedule& schedule, std::size_t step,
              ParameterList& params);

// Throws TrainingError naming the first parameter with a non-finite gradient.
void check_finite_gradients(const ParameterList& params);

// Scales all gradients so their global L2 norm is at most max_norm.
// Returns the norm before clipping.
double clip_gradients(ParameterList& params, double max_norm);

}  // namespace tla

#endif  // TLA_OPTIM_H_
