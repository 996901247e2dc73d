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

#include "tla/optim.h"

#include <cmath>
#include <string>

#include "tla/errors.h"

namespace tla {

Adam::Adam(ParameterList params, AdamConfig config)
    : params_(std::move(params)), config_(config) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const NamedTensor& p : params_) {
    m_.emplace_back(p.tensor.numel(), 0.0);
    v_.emplace_back(p.tensor.numel(), 0.0);
  }
}

void Adam::step() {
  check_finite_gradients(params_);
  if (config_.clip_norm > 0) clip_gradients(params_, config_.clip_norm);
  ++t_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    Tensor& p = params_[k].tensor;
    auto g = p.grad();
    auto w = p.values();
    auto& m = m_[k];
    auto& v = v_[k];
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      w[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  }
}

double LinearDecaySchedule::rate(std::size_t step) const {
  if (total_steps == 0) throw ConfigError("schedule needs total_steps >= 1");
  if (step > total_steps) {
    throw DomainError("schedule step " + std::to_string(step) +
                      " beyond total " + std::to_string(total_steps));
  }
  const double frac =
      static_cast<double>(step) / static_cast<double>(total_steps);
  return start + (end - start) * frac;
}

void sgd_step(const LinearDecaySchedule& schedule, std::size_t step,
              ParameterList& params) {
  const double rate = schedule.rate(step);
  for (NamedTensor& p : params) {
    auto w = p.tensor.values();
    auto g = p.tensor.grad();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= rate * g[i];
  }
}

void check_finite_gradients(const ParameterList& params) {
  for (const NamedTensor& p : params) {
    for (double g : p.tensor.grad()) {
      if (!std::isfinite(g)) {
        throw TrainingError("non-finite gradient in parameter " + p.name);
      }
    }
  }
}

double clip_gradients(ParameterList& params, double max_norm) {
  double sq = 0;
  for (const NamedTensor& p : params)
    for (double g : p.tensor.grad()) sq += g * g;
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0) {
    const double factor = max_norm / norm;
    for (NamedTensor& p : params)
      for (double& g : p.tensor.grad()) g *= factor;
  }
  return norm;
}

}  // namespace tla
