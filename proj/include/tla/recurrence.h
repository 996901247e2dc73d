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

#ifndef TLA_RECURRENCE_H_
#define TLA_RECURRENCE_H_

#include <cstddef>
#include <string_view>
#include <vector>

namespace tla {

// Linear scalar recurrence x_i = W x_{i-1} with no hidden units; after n
// steps x_n = W^n x_0.
struct ScalarRecurrence {
  double weight = 1.0;
  double initial = 0.0;
  std::size_t steps = 0;
};

enum class RecurrenceRegime { kExplodes, kVanishes, kNeutral };

// W^n x0, by repeated multiplication so that it agrees bit-for-bit with
// the trajectory below.
double scalar_recurrence(const ScalarRecurrence& r);

// x_0 .. x_n (n + 1 values).
std::vector<double> recurrence_trajectory(const ScalarRecurrence& r);

// |W| > 1 explodes, |W| < 1 vanishes, |W| == 1 neither.
RecurrenceRegime classify_regime(double weight);
std::string_view regime_name(RecurrenceRegime regime);

}  // namespace tla

#endif  // TLA_RECURRENCE_H_
