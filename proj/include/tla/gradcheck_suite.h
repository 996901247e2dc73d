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

#ifndef TLA_GRADCHECK_SUITE_H_
#define TLA_GRADCHECK_SUITE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tla/gradcheck.h"

namespace tla {

enum class GradScope { kOps, kLayers, kModels };
std::string_view grad_scope_name(GradScope scope);
GradScope parse_grad_scope(std::string_view name);

// Tolerances per scope: primitive ops and non-recurrent layers 1e-6,
// recurrences unrolled at most 10 steps 1e-4, whole models 1e-3.
inline constexpr double kOpTolerance = 1e-6;
inline constexpr double kRecurrentTolerance = 1e-4;
inline constexpr double kModelTolerance = 1e-3;

struct GradCheckEntry {
  std::string scope;
  std::string name;
  double tolerance = 0.0;
  GradCheckResult result;
  bool passed() const { return result.max_rel_error <= tolerance; }
};

struct GradSuiteOptions {
  std::uint64_t seed = 1;
  // Adds a tanh whose backward rule is scaled by 1.1, as a negative control.
  bool inject_fault = false;
};

std::vector<GradCheckEntry> run_gradcheck_suite(GradScope scope,
                                                const GradSuiteOptions& options = {});

}  // namespace tla

#endif  // TLA_GRADCHECK_SUITE_H_
