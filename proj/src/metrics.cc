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

#include "tla/metrics.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>

#include <json.hpp>

#include "tla/csv.h"
#include "tla/errors.h"

namespace tla {

ConfusionMatrix::ConfusionMatrix(std::size_t num_classes)
    : n_(num_classes), cells_(num_classes * num_classes, 0) {
  if (num_classes == 0) throw DomainError("confusion matrix needs >= 1 class");
}

void ConfusionMatrix::check_class(std::size_t k) const {
  if (k >= n_) {
    throw DomainError("class " + std::to_string(k) + " out of range for " +
                      std::to_string(n_) + " classes");
  }
}

void ConfusionMatrix::add(std::size_t gold, const Classification& predicted) {
  check_class(gold);
  if (predicted.is_rejected()) {
    ++rejected_;
    return;
  }
  check_class(predicted.label());
  ++cells_[gold * n_ + predicted.label()];
}

void ConfusionMatrix::set(std::size_t gold, std::size_t predicted,
                          std::size_t count) {
  check_class(gold);
  check_class(predicted);
  cells_[gold * n_ + predicted] = count;
}

void ConfusionMatrix::set_rejected(std::size_t count) { rejected_ = count; }

std::size_t ConfusionMatrix::at(std::size_t gold, std::size_t predicted) const {
  check_class(gold);
  check_class(predicted);
  return cells_[gold * n_ + predicted];
}

std::size_t ConfusionMatrix::accepted_count() const {
  std::size_t s = 0;
  for (std::size_t c : cells_) s += c;
  return s;
}

std::size_t ConfusionMatrix::true_positives(std::size_t k) const {
  return at(k, k);
}

std::size_t ConfusionMatrix::false_positives(std::size_t k) const {
  check_class(k);
  std::size_t s = 0;
  for (std::size_t g = 0; g < n_; ++g)
    if (g != k) s += cells_[g * n_ + k];
  return s;
}

std::size_t ConfusionMatrix::false_negatives(std::size_t k) const {
  check_class(k);
  std::size_t s = 0;
  for (std::size_t p = 0; p < n_; ++p)
    if (p != k) s += cells_[k * n_ + p];
  return s;
}

std::size_t ConfusionMatrix::support(std::size_t k) const {
  return true_positives(k) + false_negatives(k);
}

ConfusionMatrix confusion(std::span<const Classification> predictions,
                          std::span<const std::size_t> gold,
                          std::size_t num_classes) {
  if (predictions.size() != gold.size()) {
    throw DimensionError("confusion: " + std::to_string(predictions.size()) +
                         " predictions for " + std::to_string(gold.size()) +
                         " gold labels");
  }
  ConfusionMatrix cm(num_classes);
  for (std::size_t i = 0; i < gold.size(); ++i) cm.add(gold[i], predictions[i]);
  return cm;
}

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double precision(const ConfusionMatrix& cm, std::size_t k) {
  return ratio(cm.true_positives(k),
               cm.true_positives(k) + cm.false_positives(k));
}

double recall(const ConfusionMatrix& cm, std::size_t k) {
  return ratio(cm.true_positives(k),
               cm.true_positives(k) + cm.false_negatives(k));
}

double f1(double p, double r) {
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

std::string_view averaging_name(Averaging scheme) {
  return scheme == Averaging::kMacro ? "macro" : "weighted";
}

Averaging parse_averaging(std::string_view name) {
  if (name == "macro") return Averaging::kMacro;
  if (name == "weighted") return Averaging::kWeighted;
  throw ConfigError("unknown averaging scheme '" + std::string(name) +
                    "' (expected macro or weighted)");
}

EvalReport aggregate(const ConfusionMatrix& cm, Averaging scheme) {
  EvalReport r;
  r.scheme = scheme;
  r.total = cm.total_count();
  r.rejected = cm.rejected_count();
  const std::size_t accepted = cm.accepted_count();
  r.coverage = r.total == 0 ? 1.0 : ratio(accepted, r.total);
  std::size_t diagonal = 0;
  for (std::size_t k = 0; k < cm.num_classes(); ++k)
    diagonal += cm.true_positives(k);
  r.accuracy = ratio(diagonal, accepted);
  if (accepted == 0) r.warnings.push_back("accuracy: no accepted samples");

  for (std::size_t k = 0; k < cm.num_classes(); ++k) {
    ClassMetrics m;
    const std::size_t tp = cm.true_positives(k);
    if (tp + cm.false_positives(k) == 0)
      r.warnings.push_back("precision of class " + std::to_string(k) +
                           ": no predictions, reported as 0");
    if (tp + cm.false_negatives(k) == 0)
      r.warnings.push_back("recall of class " + std::to_string(k) +
                           ": no gold samples, reported as 0");
    m.precision = precision(cm, k);
    m.recall = recall(cm, k);
    m.f1 = f1(m.precision, m.recall);
    m.support = cm.support(k);
    r.per_class.push_back(m);
  }

  const double n = static_cast<double>(cm.num_classes());
  for (const ClassMetrics& m : r.per_class) {
    const double w = scheme == Averaging::kMacro
                         ? 1.0 / n
                         : ratio(m.support, accepted);
    r.precision += w * m.precision;
    r.recall += w * m.recall;
    r.f1 += w * m.f1;
  }
  return r;
}

TableFormat parse_table_format(std::string_view name) {
  if (name == "csv") return TableFormat::kCsv;
  if (name == "json") return TableFormat::kJson;
  if (name == "text") return TableFormat::kText;
  throw ConfigError("unknown table format '" + std::string(name) + "'");
}

namespace {

int language_rank(const std::string& language) {
  if (language == "english") return 0;
  if (language == "bangla") return 1;
  if (language == "hindi") return 2;
  return 3;
}

std::string full_precision(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string two_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string capitalized(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = s[0] - 'a' + 'A';
  return s;
}

const std::vector<std::string> kCsvHeader = {
    "model",  "language", "accuracy", "precision", "recall",
    "f1",     "coverage", "total",    "rejected",  "averaging"};

}  // namespace

std::vector<ResultRow> order_results(std::vector<ResultRow> rows) {
  std::map<std::string, std::size_t> model_order;
  for (const ResultRow& r : rows) model_order.emplace(r.model, model_order.size());
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const ResultRow& a, const ResultRow& b) {
                     const std::size_t ma = model_order[a.model];
                     const std::size_t mb = model_order[b.model];
                     if (ma != mb) return ma < mb;
                     const int la = language_rank(a.language);
                     const int lb = language_rank(b.language);
                     if (la != lb) return la < lb;
                     return a.language < b.language;
                   });
  return rows;
}

std::string emit_results_table(std::vector<ResultRow> rows,
                               TableFormat format) {
  rows = order_results(std::move(rows));
  std::string out;
  switch (format) {
    case TableFormat::kCsv: {
      out = csv_join(kCsvHeader) + "\n";
      for (const ResultRow& r : rows) {
        const EvalReport& e = r.report;
        out += csv_join({r.model, r.language, full_precision(e.accuracy),
                         full_precision(e.precision), full_precision(e.recall),
                         full_precision(e.f1), full_precision(e.coverage),
                         std::to_string(e.total), std::to_string(e.rejected),
                         std::string(averaging_name(e.scheme))}) +
               "\n";
      }
      return out;
    }
    case TableFormat::kJson: {
      nlohmann::json j = nlohmann::json::array();
      for (const ResultRow& r : rows) {
        const EvalReport& e = r.report;
        nlohmann::json per_class = nlohmann::json::array();
        for (const ClassMetrics& m : e.per_class) {
          per_class.push_back({{"precision", m.precision},
                               {"recall", m.recall},
                               {"f1", m.f1},
                               {"support", m.support}});
        }
        j.push_back({{"model", r.model},
                     {"language", r.language},
                     {"accuracy", e.accuracy},
                     {"precision", e.precision},
                     {"recall", e.recall},
                     {"f1", e.f1},
                     {"coverage", e.coverage},
                     {"total", e.total},
                     {"rejected", e.rejected},
                     {"averaging", averaging_name(e.scheme)},
                     {"per_class", per_class},
                     {"warnings", e.warnings}});
      }
      return j.dump(2) + "\n";
    }
    case TableFormat::kText: {
      char line[160];
      std::snprintf(line, sizeof line, "%-20s %-8s %9s %10s %7s %9s\n",
                    "Models", "Set", "Accuracy", "Precision", "Recall",
                    "F1 Score");
      out = line;
      for (const ResultRow& r : rows) {
        const EvalReport& e = r.report;
        std::snprintf(line, sizeof line, "%-20s %-8s %9s %10s %7s %9s\n",
                      r.model.c_str(), capitalized(r.language).c_str(),
                      two_decimals(e.accuracy).c_str(),
                      two_decimals(e.precision).c_str(),
                      two_decimals(e.recall).c_str(),
                      two_decimals(e.f1).c_str());
        out += line;
      }
      return out;
    }
  }
  return out;
}

std::vector<ResultRow> parse_results_csv(std::string_view csv) {
  std::vector<CsvRecord> records = parse_csv(csv);
  if (records.empty() || records[0].fields != kCsvHeader)
    throw ParseError("results CSV: missing or unexpected header");
  auto number = [](const CsvRecord& rec, std::size_t col) {
    const std::string& s = rec.fields[col];
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') {
      throw ParseError("results CSV line " + std::to_string(rec.line) +
                       ": '" + s + "' is not a number");
    }
    return v;
  };
  std::vector<ResultRow> rows;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const CsvRecord& rec = records[i];
    if (rec.fields.size() != kCsvHeader.size()) {
      throw ParseError("results CSV line " + std::to_string(rec.line) +
                       ": expected " + std::to_string(kCsvHeader.size()) +
                       " fields");
    }
    ResultRow r;
    r.model = rec.fields[0];
    r.language = rec.fields[1];
    r.report.accuracy = number(rec, 2);
    r.report.precision = number(rec, 3);
    r.report.recall = number(rec, 4);
    r.report.f1 = number(rec, 5);
    r.report.coverage = number(rec, 6);
    r.report.total = static_cast<std::size_t>(number(rec, 7));
    r.report.rejected = static_cast<std::size_t>(number(rec, 8));
    r.report.scheme = parse_averaging(rec.fields[9]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace tla
