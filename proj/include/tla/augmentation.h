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

#ifndef TLA_AUGMENTATION_H_
#define TLA_AUGMENTATION_H_

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tla/text.h"

namespace tla {

// ---------------------------------------------------------------------------
// Translation

class TranslatorClient {
 public:
  virtual ~TranslatorClient() = default;
  // Throws AugmentationError when the text cannot be delivered.
  virtual std::string translate(const std::string& text, Language source,
                                Language target) const = 0;
  virtual std::string name() const = 0;
};

// Whitespace-delimited token substitution from a per-pair dictionary.
// Tokens missing from the dictionary pass through, so a pair without a
// dictionary acts as the identity. Lookups try the token as written, then
// lowercased.
class OfflineMock : public TranslatorClient {
 public:
  using Dictionary = std::map<std::string, std::string>;

  OfflineMock() = default;
  // {"hi-en": {"token": "token", ...}, ...}. Empty replacements throw
  // ValidationError.
  static OfflineMock from_json(const nlohmann::json& j);
  static OfflineMock load(const std::filesystem::path& path);

  void set_pair(Language source, Language target, Dictionary dictionary);
  std::string translate(const std::string& text, Language source,
                        Language target) const override;
  std::string name() const override { return "offline-mock"; }

 private:
  std::map<std::string, Dictionary> pairs_;  // keyed "hi-en"
};

struct HttpTranslatorConfig {
  std::string url;      // http(s)://host[:port]/path
  std::string api_key;  // sent as "api_key" when non-empty
  std::size_t max_retries = 3;
  std::chrono::milliseconds initial_backoff{200};
  std::size_t max_in_flight = 4;
  std::chrono::seconds timeout{10};

  // TLA_TRANSLATE_URL and TLA_TRANSLATE_KEY; nullopt without a URL.
  static std::optional<HttpTranslatorConfig> from_env();
};

// POSTs {"q", "source", "target"[, "api_key"]} and reads "translatedText".
// Transport failures, 429 and 5xx responses are retried with exponential
// backoff; other statuses fail at once. Safe for concurrent use; at most
// max_in_flight requests are open at a time.
class HttpTranslator : public TranslatorClient {
 public:
  explicit HttpTranslator(HttpTranslatorConfig config);
  ~HttpTranslator() override;

  std::string translate(const std::string& text, Language source,
                        Language target) const override;
  std::string name() const override { return "http"; }

 private:
  HttpTranslatorConfig config_;
  std::string origin_;  // scheme://host:port
  std::string path_;
  mutable std::counting_semaphore<1024> slots_;
};

// One translated copy per input, labels kept, language set to `target`,
// ids suffixed "~tr-<code>". Every failed id is collected before throwing
// AugmentationError; an empty translation throws ValidationError.
std::vector<LabeledExample> translate_augment(
    const std::vector<LabeledExample>& examples, const TranslatorClient& client,
    Language source, Language target, std::size_t jobs = 1);

// ---------------------------------------------------------------------------
// Noise

struct NoiseSpec {
  double probability = 0.1;
  bool swap = true;
  bool remove = true;
  bool duplicate = true;
  std::uint64_t seed = 0;

  void validate() const;  // ConfigError
};

struct NoiseResult {
  std::vector<LabeledExample> examples;
  std::size_t tokens_seen = 0;
  std::size_t tokens_hit = 0;
};

// Each whitespace token is hit with probability p by one enabled edit
// chosen uniformly: swap with its right neighbour, delete, or duplicate.
// Labels are kept, provenance becomes noise and ids gain "~nz<round>".
// A text whose every token is deleted keeps its first token.
NoiseResult noise_augment(const std::vector<LabeledExample>& examples,
                          const NoiseSpec& spec, std::size_t round = 0);

// ---------------------------------------------------------------------------
// Corpus construction

inline constexpr std::array<Language, 3> kLanguages = {
    Language::kEnglish, Language::kBangla, Language::kHindi};

struct CorpusSplits {
  DatasetSplit train;
  DatasetSplit test;
};
using Corpus = std::map<Language, CorpusSplits>;

// Per-language, per-class numbers of augmented samples to add to training.
using AugmentationTargets = std::map<Language, ClassCounts>;

// Additions that take each raw training split to its published augmented
// size (the English CAG figure follows the published total, not the
// enumerated additions).
AugmentationTargets published_targets();

// Training splits extended with the first matching pool examples for each
// (language, class). Test splits are copied untouched. A short pool throws
// AugmentationError listing every shortfall.
Corpus build_semi_noisy(const Corpus& raw,
                        const std::vector<LabeledExample>& pool,
                        const AugmentationTargets& targets);

// Translations of the other two languages' training data come first, then
// as many noise rounds over the language's own training data as the
// largest target needs.
std::vector<LabeledExample> build_augmentation_pool(
    const Corpus& raw, const TranslatorClient& client,
    const AugmentationTargets& targets, const NoiseSpec& noise,
    std::size_t jobs = 1);

// English translations of Hindi and Bangla: NAG from training only; OAG and
// CAG from training and testing.
DatasetSplit build_fully_translated(const Corpus& raw,
                                    const TranslatorClient& client,
                                    std::size_t jobs = 1);

// ---------------------------------------------------------------------------
// Published figures and reconciliation

enum class CorpusSet { kTrain, kTest };

// Raw label distribution per language and set.
ClassCounts published_raw_counts(Language language, CorpusSet set);
// Raw plus augmentation, training sets (test sets equal the raw ones).
ClassCounts published_semi_noisy_counts(Language language);
ClassCounts published_fully_translated_counts();
// Additions as enumerated per source, per language.
ClassCounts stated_additions(Language language);

struct ReconciliationRow {
  std::string corpus;  // "semi-noisy" or "fully-translated"
  std::string set;     // e.g. "english-train"
  std::string label;   // NAG, OAG, CAG or total
  std::size_t published = 0;
  std::size_t built = 0;
  // Count implied by the enumerated additions, when it differs.
  std::optional<std::size_t> stated;
  std::string note;

  bool flagged() const { return stated.has_value() || built != published; }
};

struct ReconciliationReport {
  std::vector<ReconciliationRow> rows;
  std::vector<ReconciliationRow> flagged() const;
  nlohmann::json to_json() const;
  std::string to_text() const;
};

ReconciliationReport reconcile(const Corpus& semi_noisy,
                               const DatasetSplit* fully_translated);

// ---------------------------------------------------------------------------
// Fixtures

// TRAC-2-format files with the published raw label distribution, built
// from per-language word lists: <dir>/<language>_{train,test}.csv. Also
// writes the matching offline dictionary to <dir>/dictionary.json.
void write_table_fixture(const std::filesystem::path& dir, std::uint64_t seed);
nlohmann::json fixture_dictionary();

// Reads <dir>/<language>_{train,test}.csv for all three languages.
Corpus load_corpus(const std::filesystem::path& dir);
// Writes the corpus in the same layout.
void write_corpus(const std::filesystem::path& dir, const Corpus& corpus);

}  // namespace tla

#endif  // TLA_AUGMENTATION_H_
