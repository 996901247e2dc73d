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

#include <cmath>
#include <map>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "tla/errors.h"
#include "tla/metrics.h"
#include "tla/rng.h"

namespace tla {
namespace {

ConfusionMatrix matrix(std::size_t n, const std::vector<std::size_t>& cells,
                       std::size_t rejected = 0) {
  ConfusionMatrix cm(n);
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t p = 0; p < n; ++p) cm.set(g, p, cells[g * n + p]);
  cm.set_rejected(rejected);
  return cm;
}

TEST_CASE("confusion counting") {
  const std::vector<std::size_t> gold = {0, 1, 2, 1, 0, 2, 2, 1, 0, 1};
  std::vector<Classification> all_rejected(gold.size(), Classification::rejected());
  ConfusionMatrix r = confusion(all_rejected, gold, 3);
  CHECK(r.accepted_count() == 0);
  CHECK(r.rejected_count() == 10);

  std::vector<Classification> perfect;
  for (std::size_t g : gold) perfect.push_back(Classification::of(g));
  ConfusionMatrix p = confusion(perfect, gold, 3);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      if (a != b) CHECK(p.at(a, b) == 0);

  std::vector<Classification> mixed = perfect;
  mixed[3] = Classification::rejected();
  mixed[7] = Classification::rejected();
  ConfusionMatrix m = confusion(mixed, gold, 3);
  CHECK(m.true_positives(0) + m.true_positives(1) + m.true_positives(2) == 8);
  CHECK(m.rejected_count() == 2);
  CHECK(m.total_count() == 10);
  CHECK(aggregate(m, Averaging::kWeighted).coverage == doctest::Approx(0.8));

  CHECK_THROWS_AS(confusion(mixed, std::vector<std::size_t>{0}, 3), DimensionError);
}

TEST_CASE("precision and recall examples") {
  // Class 0: TP = 5, FP = 0 (column 0 elsewhere), FN via row 0.
  ConfusionMatrix a = matrix(2, {5, 0, 0, 3});
  CHECK(precision(a, 0) == 1.0);
  ConfusionMatrix b = matrix(2, {5, 0, 5, 3});
  CHECK(precision(b, 0) == 0.5);
  ConfusionMatrix c = matrix(2, {0, 4, 0, 3});
  CHECK(precision(c, 0) == 0.0);
  CHECK(recall(matrix(2, {5, 0, 2, 1}), 0) == 1.0);
  CHECK(recall(matrix(2, {1, 3, 0, 1}), 0) == 0.25);
  CHECK(recall(matrix(2, {0, 0, 0, 1}), 0) == 0.0);
}

TEST_CASE("f1 examples and bounds") {
  CHECK(f1(1.0, 0.0) == 0.0);
  CHECK(f1(0.0, 0.0) == 0.0);
  CHECK(f1(0.93, 0.93) == doctest::Approx(0.93).epsilon(1e-15));
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform();
    CHECK(std::fabs(f1(x, x) - x) <= 1e-15);
  }
  for (int i = 0; i < 1000; ++i) {
    const double p = rng.uniform(), r = rng.uniform();
    CHECK(f1(p, r) <= (p + r) / 2 + 1e-15);
  }
}

TEST_CASE("aggregate special cases") {
  ConfusionMatrix single = matrix(3, {7, 1, 2, 0, 0, 0, 0, 0, 0});
  EvalReport macro_single = aggregate(single, Averaging::kWeighted);
  CHECK(macro_single.recall == doctest::Approx(recall(single, 0)));
  CHECK(macro_single.f1 == doctest::Approx(macro_single.per_class[0].f1));

  ConfusionMatrix balanced = matrix(3, {8, 1, 1, 2, 6, 2, 0, 3, 7});
  EvalReport macro = aggregate(balanced, Averaging::kMacro);
  EvalReport weighted = aggregate(balanced, Averaging::kWeighted);
  CHECK(macro.precision == doctest::Approx(weighted.precision).epsilon(1e-15));
  CHECK(macro.recall == doctest::Approx(weighted.recall).epsilon(1e-15));
  CHECK(macro.f1 == doctest::Approx(weighted.f1).epsilon(1e-15));

  ConfusionMatrix empty_class = matrix(3, {3, 0, 0, 0, 0, 0, 1, 0, 2});
  EvalReport e = aggregate(empty_class, Averaging::kMacro);
  CHECK_FALSE(e.warnings.empty());
  for (const auto& m : e.per_class) {
    CHECK(m.precision >= 0.0);
    CHECK(m.precision <= 1.0);
  }
}

TEST_CASE("rejected samples do not enter F1") {
  ConfusionMatrix cm = matrix(3, {8, 1, 1, 2, 6, 2, 0, 3, 7});
  EvalReport before = aggregate(cm, Averaging::kWeighted);
  cm.set_rejected(12);
  EvalReport after = aggregate(cm, Averaging::kWeighted);
  CHECK(after.f1 == before.f1);
  CHECK(after.precision == before.precision);
  CHECK(after.accuracy == before.accuracy);
  CHECK(after.coverage == doctest::Approx(30.0 / 42.0));
}

TEST_CASE("table emission") {
  CHECK(emit_results_table({}, TableFormat::kCsv) ==
        "model,language,accuracy,precision,recall,f1,coverage,total,rejected,"
        "averaging\n");
  CHECK(parse_results_csv(emit_results_table({}, TableFormat::kCsv)).empty());

  ConfusionMatrix cm = matrix(3, {8, 1, 1, 2, 6, 2, 0, 3, 7}, 2);
  ResultRow row{"TLA-Net", "english", aggregate(cm, Averaging::kWeighted)};
  const std::string text = emit_results_table({row}, TableFormat::kText);
  CHECK(text.find("TLA-Net") != std::string::npos);
  CHECK(text.find("English") != std::string::npos);
  CHECK(text.find("0.70") != std::string::npos);  // accuracy 21/30

  std::vector<ResultRow> rows = {
      {"LSTM", "hindi", aggregate(matrix(3, {1, 2, 3, 4, 5, 6, 7, 8, 9}), Averaging::kWeighted)},
      {"LSTM", "english", aggregate(matrix(3, {9, 1, 0, 1, 9, 0, 0, 1, 9}), Averaging::kWeighted)},
      {"TLA-Net", "bangla", aggregate(cm, Averaging::kMacro)},
      {"LSTM", "bangla", aggregate(matrix(3, {3, 1, 4, 1, 5, 9, 2, 6, 5}), Averaging::kWeighted)}};
  std::vector<ResultRow> ordered = order_results(rows);
  CHECK(ordered[0].language == "english");
  CHECK(ordered[1].language == "bangla");
  CHECK(ordered[2].language == "hindi");
  CHECK(ordered[3].model == "TLA-Net");

  // CSV values reproduce the JSON sidecar's full-precision numbers.
  auto parsed = parse_results_csv(emit_results_table(rows, TableFormat::kCsv));
  auto json = nlohmann::json::parse(emit_results_table(rows, TableFormat::kJson));
  REQUIRE(parsed.size() == json.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    CHECK(parsed[i].model == json[i]["model"].get<std::string>());
    CHECK(parsed[i].report.accuracy == json[i]["accuracy"].get<double>());
    CHECK(parsed[i].report.precision == json[i]["precision"].get<double>());
    CHECK(parsed[i].report.recall == json[i]["recall"].get<double>());
    CHECK(parsed[i].report.f1 == json[i]["f1"].get<double>());
    CHECK(parsed[i].report.coverage == json[i]["coverage"].get<double>());
    CHECK(parsed[i].report.rejected == json[i]["rejected"].get<std::size_t>());
  }
}

}  // namespace
}  // namespace tla
