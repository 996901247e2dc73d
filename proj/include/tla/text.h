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

#ifndef TLA_TEXT_H_
#define TLA_TEXT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tla/layers.h"

namespace tla {

// Sub-Task A labels. The enumerator value is the class index.
enum class Label { kNag = 0, kOag = 1, kCag = 2 };
inline constexpr std::size_t kNumLabels = 3;
std::string_view label_name(Label label);  // "NAG", "OAG", "CAG"
Label parse_label(std::string_view name);  // throws ValidationError
Label label_from_index(std::size_t index);

enum class Language { kEnglish, kBangla, kHindi };
std::string_view language_name(Language language);  // lowercase
Language parse_language(std::string_view name);    // throws ValidationError
// ISO 639-1 code used by translation endpoints: en, bn, hi.
std::string_view language_code(Language language);

enum class Provenance { kRaw, kNoise, kTranslated };
std::string_view provenance_name(Provenance provenance);
Provenance parse_provenance(std::string_view name);

struct LabeledExample {
  std::string id;
  std::string text;
  Label label = Label::kNag;
  Language language = Language::kEnglish;
  Provenance provenance = Provenance::kRaw;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

using ClassCounts = std::array<std::size_t, kNumLabels>;
std::size_t count_total(const ClassCounts& counts);

struct DatasetSplit {
  std::string name;
  std::vector<LabeledExample> examples;
  ClassCounts counts{};

  static DatasetSplit from_examples(std::string name,
                                    std::vector<LabeledExample> examples);
  void recount();
  // Throws ValidationError when `counts` disagrees with a fresh tally.
  void verify_counts() const;
  std::size_t size() const { return examples.size(); }
  std::array<std::size_t, 3> provenance_counts() const;
};

// Lowercases (ASCII and Latin-1), replaces punctuation with spaces and
// splits on whitespace. Letters and combining marks of other scripts pass
// through unchanged, as do the zero-width joiners used by Indic scripts.
// Apostrophes are kept inside tokens.
std::vector<std::string> tokenize(std::string_view text);

class Vocabulary {
 public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kUnk = 1;

  // PAD and UNK only.
  Vocabulary();

  // Ranks tokens by descending frequency, ties broken lexicographically;
  // keeps those with count >= min_freq, at most max_size - 2 of them.
  static Vocabulary build(const std::vector<std::vector<std::string>>& corpus,
                          std::size_t max_size, std::size_t min_freq = 1);
  // Restores a vocabulary from its id-ordered token list (PAD, UNK first).
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  std::size_t id(std::string_view token) const;
  const std::string& token(std::size_t id) const;
  const std::vector<std::string>& tokens() const { return tokens_; }
  // Occurrence count of each id in the build corpus (0 for PAD/UNK and
  // restored vocabularies).
  const std::vector<std::size_t>& counts() const { return counts_; }

  // FNV-1a 64 over the id-ordered token list, as 16 hex digits.
  std::string content_hash() const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::size_t> counts_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline constexpr std::string_view kPadToken = "<pad>";
inline constexpr std::string_view kUnkToken = "<unk>";

// Keeps the first max_len ids and right-pads with PAD.
TokenIds encode_and_pad(const Vocabulary& vocab,
                        const std::vector<std::string>& tokens,
                        std::size_t max_len);
// Maps ids back to tokens, stopping at the first PAD.
std::vector<std::string> decode(const Vocabulary& vocab,
                                const TokenIds& ids);

struct EncodedExample {
  TokenIds tokens;
  std::size_t label = 0;
};

std::vector<EncodedExample> encode_dataset(const Vocabulary& vocab,
                                           const DatasetSplit& split,
                                           std::size_t max_len);
Vocabulary build_vocab(const DatasetSplit& split, std::size_t max_size,
                       std::size_t min_freq = 1);

// Reads a CSV with header columns id,text,label and optional language and
// provenance columns (in any order). Rows without a language column take
// `language`; rows without provenance are raw.
DatasetSplit load_trac2(const std::filesystem::path& path,
                        Language language = Language::kEnglish);
DatasetSplit parse_trac2(std::string_view csv, const std::string& name,
                         Language language = Language::kEnglish);
// Serializes with all five columns.
std::string format_trac2(const DatasetSplit& split);

// Per-class shuffle under `seed`; the first round(fraction * n) members of
// each class (clamped to [1, n - 1]) go to the first split. Both outputs
// keep the input order.
std::pair<DatasetSplit, DatasetSplit> stratified_split(
    const DatasetSplit& split, double train_fraction, std::uint64_t seed);

}  // namespace tla

#endif  // TLA_TEXT_H_
