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

#ifndef TLA_METRICS_H_
#define TLA_METRICS_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tla/wisdomnet.h"

namespace tla {

// Rows are gold classes, columns predicted classes. Rejected predictions
// are counted separately and never enter the matrix.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t num_classes);

  void add(std::size_t gold, const Classification& predicted);
  // Direct cell access, used to build matrices from external counts.
  void set(std::size_t gold, std::size_t predicted, std::size_t count);
  void set_rejected(std::size_t count);

  std::size_t num_classes() const { return n_; }
  std::size_t at(std::size_t gold, std::size_t predicted) const;
  std::size_t rejected_count() const { return rejected_; }
  std::size_t accepted_count() const;
  std::size_t total_count() const { return accepted_count() + rejected_; }

  std::size_t true_positives(std::size_t k) const;
  std::size_t false_positives(std::size_t k) const;
  std::size_t false_negatives(std::size_t k) const;
  // Accepted samples whose gold label is k.
  std::size_t support(std::size_t k) const;

 private:
  void check_class(std::size_t k) const;

  std::size_t n_;
  std::vector<std::size_t> cells_;
  std::size_t rejected_ = 0;
};

ConfusionMatrix confusion(std::span<const Classification> predictions,
                          std::span<const std::size_t> gold,
                          std::size_t num_classes);

// 0/0 is reported as 0.
double precision(const ConfusionMatrix& cm, std::size_t k);
double recall(const ConfusionMatrix& cm, std::size_t k);
double f1(double p, double r);

enum class Averaging { kMacro, kWeighted };
std::string_view averaging_name(Averaging scheme);
Averaging parse_averaging(std::string_view name);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct EvalReport {
  Averaging scheme = Averaging::kWeighted;
  // Correct / accepted; 0 when nothing was accepted.
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Accepted / total; 1 for an empty evaluation.
  double coverage = 1.0;
  std::size_t total = 0;
  std::size_t rejected = 0;
  std::vector<ClassMetrics> per_class;
  // One entry per 0/0 encountered while computing the metrics.
  std::vector<std::string> warnings;
};

EvalReport aggregate(const ConfusionMatrix& cm, Averaging scheme);

struct ResultRow {
  std::string model;
  std::string language;
  EvalReport report;
};

enum class TableFormat { kCsv, kJson, kText };
TableFormat parse_table_format(std::string_view name);

// Sorts model-major (first-seen model order), then English, Bangla, Hindi,
// then any other language alphabetically.
std::vector<ResultRow> order_results(std::vector<ResultRow> rows);

// CSV/JSON keep full precision (17 significant digits); text shows two
// decimals in the column order model, language, accuracy, precision,
// recall, f1.
std::string emit_results_table(std::vector<ResultRow> rows, TableFormat format);

// Parses the CSV form back into rows. Only the fields emitted in CSV are
// restored (per-class metrics are not).
std::vector<ResultRow> parse_results_csv(std::string_view csv);

}  // namespace tla

#endif  // TLA_METRICS_H_
