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

#include "tla/recurrence.h"

#include <cmath>

namespace tla {

double scalar_recurrence(const ScalarRecurrence& r) {
  double x = r.initial;
  for (std::size_t i = 0; i < r.steps; ++i) x *= r.weight;
  return x;
}

std::vector<double> recurrence_trajectory(const ScalarRecurrence& r) {
  std::vector<double> out;
  out.reserve(r.steps + 1);
  double x = r.initial;
  out.push_back(x);
  for (std::size_t i = 0; i < r.steps; ++i) {
    x *= r.weight;
    out.push_back(x);
  }
  return out;
}

RecurrenceRegime classify_regime(double weight) {
  const double magnitude = std::fabs(weight);
  if (magnitude > 1.0) return RecurrenceRegime::kExplodes;
  if (magnitude < 1.0) return RecurrenceRegime::kVanishes;
  return RecurrenceRegime::kNeutral;
}

std::string_view regime_name(RecurrenceRegime regime) {
  switch (regime) {
    case RecurrenceRegime::kExplodes:
      return "explodes";
    case RecurrenceRegime::kVanishes:
      return "vanishes";
    case RecurrenceRegime::kNeutral:
      return "neutral";
  }
  return "?";
}

}  // namespace tla
