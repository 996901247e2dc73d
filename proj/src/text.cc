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

#include "tla/text.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "tla/csv.h"
#include "tla/errors.h"
#include "tla/rng.h"

namespace tla {

std::string_view label_name(Label label) {
  switch (label) {
    case Label::kNag: return "NAG";
    case Label::kOag: return "OAG";
    case Label::kCag: return "CAG";
  }
  return "?";
}

Label parse_label(std::string_view name) {
  if (name == "NAG") return Label::kNag;
  if (name == "OAG") return Label::kOag;
  if (name == "CAG") return Label::kCag;
  throw ValidationError("unknown label '" + std::string(name) +
                        "' (expected NAG, OAG or CAG)");
}

Label label_from_index(std::size_t index) {
  if (index >= kNumLabels)
    throw DomainError("label index " + std::to_string(index) + " out of range");
  return static_cast<Label>(index);
}

std::string_view language_name(Language language) {
  switch (language) {
    case Language::kEnglish: return "english";
    case Language::kBangla: return "bangla";
    case Language::kHindi: return "hindi";
  }
  return "?";
}

Language parse_language(std::string_view name) {
  if (name == "english") return Language::kEnglish;
  if (name == "bangla") return Language::kBangla;
  if (name == "hindi") return Language::kHindi;
  throw ValidationError("unknown language '" + std::string(name) + "'");
}

std::string_view language_code(Language language) {
  switch (language) {
    case Language::kEnglish: return "en";
    case Language::kBangla: return "bn";
    case Language::kHindi: return "hi";
  }
  return "?";
}

std::string_view provenance_name(Provenance provenance) {
  switch (provenance) {
    case Provenance::kRaw: return "raw";
    case Provenance::kNoise: return "noise";
    case Provenance::kTranslated: return "translated";
  }
  return "?";
}

Provenance parse_provenance(std::string_view name) {
  if (name == "raw") return Provenance::kRaw;
  if (name == "noise") return Provenance::kNoise;
  if (name == "translated") return Provenance::kTranslated;
  throw ValidationError("unknown provenance '" + std::string(name) + "'");
}

std::size_t count_total(const ClassCounts& counts) {
  return counts[0] + counts[1] + counts[2];
}

DatasetSplit DatasetSplit::from_examples(std::string name,
                                         std::vector<LabeledExample> examples) {
  DatasetSplit s;
  s.name = std::move(name);
  s.examples = std::move(examples);
  s.recount();
  return s;
}

void DatasetSplit::recount() {
  counts = {};
  for (const LabeledExample& e : examples)
    ++counts[static_cast<std::size_t>(e.label)];
}

void DatasetSplit::verify_counts() const {
  ClassCounts fresh{};
  for (const LabeledExample& e : examples)
    ++fresh[static_cast<std::size_t>(e.label)];
  if (fresh != counts) {
    throw ValidationError("split '" + name + "': stored class counts " +
                          std::to_string(counts[0]) + "/" +
                          std::to_string(counts[1]) + "/" +
                          std::to_string(counts[2]) +
                          " disagree with tally " + std::to_string(fresh[0]) +
                          "/" + std::to_string(fresh[1]) + "/" +
                          std::to_string(fresh[2]));
  }
}

std::array<std::size_t, 3> DatasetSplit::provenance_counts() const {
  std::array<std::size_t, 3> out{};
  for (const LabeledExample& e : examples)
    ++out[static_cast<std::size_t>(e.provenance)];
  return out;
}

// ---------------------------------------------------------------------------
// Tokenizer

namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Decodes one code point starting at s[i], advancing i. Invalid sequences
// yield U+FFFD and consume one byte.
char32_t next_code_point(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return kReplacement;
  }
  if (i + len > s.size()) {
    ++i;
    return kReplacement;
  }
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return kReplacement;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  // Overlong forms, surrogates and values past U+10FFFF are invalid.
  static constexpr char32_t kMinForLength[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMinForLength[len] || (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
    ++i;
    return kReplacement;
  }
  i += len;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_separator(char32_t cp) {
  if (cp < 0x80) {
    // Keras' default filter set plus whitespace; the apostrophe survives.
    static constexpr std::string_view kFilters =
        "!\"#$%&()*+,-./:;<=>?@[\\]^_`{|}~ \t\n\r\v\f";
    return kFilters.find(static_cast<char>(cp)) != std::string_view::npos;
  }
  if (cp >= 0xA0 && cp <= 0xBF) return true;  // NBSP and Latin-1 punctuation
  if (cp == 0xD7 || cp == 0xF7) return true;  // multiplication and division
  if (cp == 0x0964 || cp == 0x0965) return true;  // danda, double danda
  if (cp >= 0x2000 && cp <= 0x206F) {
    return cp != 0x200C && cp != 0x200D;  // ZWNJ and ZWJ shape Indic text
  }
  if (cp == 0x3000 || cp == kReplacement) return true;
  return false;
}

char32_t lowercase(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  return cp;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t cp = lowercase(next_code_point(text, i));
    if (is_separator(cp)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      append_utf8(current, cp);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary::Vocabulary() {
  tokens_ = {std::string(kPadToken), std::string(kUnkToken)};
  counts_ = {0, 0};
  index_[tokens_[0]] = kPad;
  index_[tokens_[1]] = kUnk;
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& corpus,
                             std::size_t max_size, std::size_t min_freq) {
  if (max_size < 2) throw ConfigError("vocabulary max_size must be >= 2");
  std::map<std::string, std::size_t> freq;
  for (const auto& doc : corpus)
    for (const auto& tok : doc) ++freq[tok];
  std::vector<std::pair<std::string, std::size_t>> ranked;
  for (auto& [tok, n] : freq) {
    if (n < min_freq || tok == kPadToken || tok == kUnkToken) continue;
    ranked.emplace_back(tok, n);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > max_size - 2) ranked.resize(max_size - 2);
  Vocabulary v;
  for (auto& [tok, n] : ranked) {
    v.index_[tok] = v.tokens_.size();
    v.tokens_.push_back(tok);
    v.counts_.push_back(n);
  }
  return v;
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  if (tokens.size() < 2 || tokens[0] != kPadToken || tokens[1] != kUnkToken)
    throw ArtifactError("vocabulary must start with <pad>, <unk>");
  Vocabulary v;
  for (std::size_t i = 2; i < tokens.size(); ++i) {
    if (!v.index_.emplace(tokens[i], i).second)
      throw ArtifactError("duplicate vocabulary token '" + tokens[i] + "'");
    v.tokens_.push_back(tokens[i]);
    v.counts_.push_back(0);
  }
  return v;
}

std::size_t Vocabulary::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(std::size_t id) const {
  if (id >= tokens_.size())
    throw DomainError("token id " + std::to_string(id) +
                      " outside vocabulary of size " +
                      std::to_string(tokens_.size()));
  return tokens_[id];
}

std::string Vocabulary::content_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const std::string& t : tokens_) {
    for (unsigned char c : t) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0x0A;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

TokenIds encode_and_pad(const Vocabulary& vocab,
                        const std::vector<std::string>& tokens,
                        std::size_t max_len) {
  if (max_len == 0) throw ConfigError("max_len must be >= 1");
  TokenIds ids(max_len, Vocabulary::kPad);
  for (std::size_t i = 0; i < std::min(max_len, tokens.size()); ++i)
    ids[i] = vocab.id(tokens[i]);
  return ids;
}

std::vector<std::string> decode(const Vocabulary& vocab, const TokenIds& ids) {
  std::vector<std::string> out;
  for (std::size_t id : ids) {
    if (id == Vocabulary::kPad) break;
    out.push_back(vocab.token(id));
  }
  return out;
}

std::vector<EncodedExample> encode_dataset(const Vocabulary& vocab,
                                           const DatasetSplit& split,
                                           std::size_t max_len) {
  std::vector<EncodedExample> out;
  out.reserve(split.examples.size());
  for (const LabeledExample& e : split.examples) {
    out.push_back({encode_and_pad(vocab, tokenize(e.text), max_len),
                   static_cast<std::size_t>(e.label)});
  }
  return out;
}

Vocabulary build_vocab(const DatasetSplit& split, std::size_t max_size,
                       std::size_t min_freq) {
  std::vector<std::vector<std::string>> corpus;
  corpus.reserve(split.examples.size());
  for (const LabeledExample& e : split.examples)
    corpus.push_back(tokenize(e.text));
  return Vocabulary::build(corpus, max_size, min_freq);
}

// ---------------------------------------------------------------------------
// TRAC-2 CSV

DatasetSplit parse_trac2(std::string_view csv, const std::string& name,
                         Language language) {
  std::vector<CsvRecord> records;
  try {
    records = parse_csv(csv);
  } catch (const ParseError& e) {
    throw ParseError(name + ": " + e.what());
  }
  if (records.empty()) throw ParseError(name + ": missing header row");
  const auto& header = records[0].fields;
  auto column = [&](std::string_view col) -> int {
    auto it = std::find(header.begin(), header.end(), col);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int c_id = column("id"), c_text = column("text"),
            c_label = column("label"), c_lang = column("language"),
            c_prov = column("provenance");
  if (c_id < 0 || c_text < 0 || c_label < 0) {
    throw ParseError(name + ": header must contain id,text,label columns");
  }
  std::vector<LabeledExample> examples;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const CsvRecord& rec = records[r];
    if (rec.fields.size() != header.size()) {
      throw ParseError(name + ": line " + std::to_string(rec.line) +
                       ": expected " + std::to_string(header.size()) +
                       " fields, found " + std::to_string(rec.fields.size()));
    }
    LabeledExample e;
    e.id = rec.fields[c_id];
    e.text = rec.fields[c_text];
    try {
      e.label = parse_label(rec.fields[c_label]);
      e.language = c_lang >= 0 ? parse_language(rec.fields[c_lang]) : language;
      e.provenance =
          c_prov >= 0 ? parse_provenance(rec.fields[c_prov]) : Provenance::kRaw;
    } catch (const ValidationError& err) {
      throw ValidationError(name + ": line " + std::to_string(rec.line) +
                            " (id " + e.id + "): " + err.what());
    }
    examples.push_back(std::move(e));
  }
  DatasetSplit split = DatasetSplit::from_examples(name, std::move(examples));
  split.verify_counts();
  return split;
}

DatasetSplit load_trac2(const std::filesystem::path& path, Language language) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trac2(buf.str(), path.string(), language);
}

std::string format_trac2(const DatasetSplit& split) {
  std::string out = "id,text,label,language,provenance\n";
  for (const LabeledExample& e : split.examples) {
    out += csv_join({e.id, e.text, std::string(label_name(e.label)),
                     std::string(language_name(e.language)),
                     std::string(provenance_name(e.provenance))}) +
           "\n";
  }
  return out;
}

std::pair<DatasetSplit, DatasetSplit> stratified_split(
    const DatasetSplit& split, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ConfigError("train fraction must lie in (0, 1)");
  std::array<std::vector<std::size_t>, kNumLabels> members;
  for (std::size_t i = 0; i < split.examples.size(); ++i)
    members[static_cast<std::size_t>(split.examples[i].label)].push_back(i);
  std::vector<bool> to_train(split.examples.size(), false);
  for (std::size_t k = 0; k < kNumLabels; ++k) {
    auto& idx = members[k];
    if (idx.empty()) continue;
    if (idx.size() < 2) {
      throw DomainError("stratified split: class " +
                        std::string(label_name(label_from_index(k))) +
                        " has fewer than 2 examples");
    }
    Rng rng(mix_seed(seed, k));
    rng.shuffle(idx.begin(), idx.end());
    auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(idx.size())));
    n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
    for (std::size_t j = 0; j < n_train; ++j) to_train[idx[j]] = true;
  }
  std::vector<LabeledExample> a, b;
  for (std::size_t i = 0; i < split.examples.size(); ++i)
    (to_train[i] ? a : b).push_back(split.examples[i]);
  return {DatasetSplit::from_examples(split.name + "/train", std::move(a)),
          DatasetSplit::from_examples(split.name + "/validation", std::move(b))};
}

}  // namespace tla
