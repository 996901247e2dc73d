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

#include "tla/augmentation.h"

#include <algorithm>
#include <cstdio>
#include <mutex>
#include <sstream>

#include "tla/errors.h"
#include "tla/io.h"
#include "tla/rng.h"
#include "tla/trainer.h"

namespace tla {

namespace {

std::string pair_key(Language source, Language target) {
  return std::string(language_code(source)) + "-" +
         std::string(language_code(target));
}

std::vector<std::string> split_whitespace(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

Language language_from_code(std::string_view code) {
  for (Language l : kLanguages)
    if (language_code(l) == code) return l;
  throw ValidationError("unknown language code '" + std::string(code) + "'");
}

}  // namespace

// ---------------------------------------------------------------------------
// OfflineMock

OfflineMock OfflineMock::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("translation dictionary must be an object");
  OfflineMock mock;
  for (const auto& [key, map] : j.items()) {
    const auto dash = key.find('-');
    if (dash == std::string::npos)
      throw ValidationError("dictionary key '" + key + "' is not <src>-<dst>");
    const Language src = language_from_code(key.substr(0, dash));
    const Language dst = language_from_code(key.substr(dash + 1));
    if (!map.is_object())
      throw ValidationError("dictionary '" + key + "' must map tokens to tokens");
    Dictionary dict;
    for (const auto& [from, to] : map.items()) {
      if (!to.is_string() || to.get<std::string>().empty())
        throw ValidationError("dictionary '" + key + "': empty replacement for '" +
                              from + "'");
      dict.emplace(from, to.get<std::string>());
    }
    mock.set_pair(src, dst, std::move(dict));
  }
  return mock;
}

OfflineMock OfflineMock::load(const std::filesystem::path& path) {
  try {
    return from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void OfflineMock::set_pair(Language source, Language target,
                           Dictionary dictionary) {
  pairs_[pair_key(source, target)] = std::move(dictionary);
}

std::string OfflineMock::translate(const std::string& text, Language source,
                                   Language target) const {
  auto it = pairs_.find(pair_key(source, target));
  if (it == pairs_.end()) return text;
  const Dictionary& dict = it->second;
  std::vector<std::string> out;
  for (const std::string& tok : split_whitespace(text)) {
    auto hit = dict.find(tok);
    if (hit == dict.end()) {
      std::string lower = tok;
      std::transform(lower.begin(), lower.end(), lower.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      hit = dict.find(lower);
    }
    out.push_back(hit == dict.end() ? tok : hit->second);
  }
  return out.empty() ? text : join(out);
}

// ---------------------------------------------------------------------------
// translate_augment

std::vector<LabeledExample> translate_augment(
    const std::vector<LabeledExample>& examples, const TranslatorClient& client,
    Language source, Language target, std::size_t jobs) {
  std::vector<LabeledExample> out(examples.size());
  std::vector<std::string> failures(examples.size());
  std::vector<char> empty(examples.size(), 0);
  parallel_for(examples.size(), jobs, [&](std::size_t i) {
    const LabeledExample& e = examples[i];
    try {
      std::string text = client.translate(e.text, source, target);
      if (text.empty() && !e.text.empty()) empty[i] = 1;
      out[i] = {e.id + "~tr-" + std::string(language_code(target)),
                std::move(text), e.label, target, Provenance::kTranslated};
    } catch (const AugmentationError& err) {
      failures[i] = err.what();
    }
  });
  std::string failed_ids, first_reason;
  std::size_t failed = 0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (failures[i].empty()) continue;
    if (failed++ > 0) failed_ids += ", ";
    failed_ids += examples[i].id;
    if (first_reason.empty()) first_reason = failures[i];
  }
  if (failed > 0) {
    throw AugmentationError(std::to_string(failed) + " of " +
                            std::to_string(examples.size()) +
                            " translations failed (" + first_reason +
                            "); undelivered ids: " + failed_ids);
  }
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (empty[i])
      throw ValidationError("empty translation for id " + examples[i].id);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Noise

void NoiseSpec::validate() const {
  if (!(probability >= 0.0 && probability <= 1.0))
    throw ConfigError("noise.probability must lie in [0, 1]");
  if (!swap && !remove && !duplicate)
    throw ConfigError("noise: at least one edit must be enabled");
}

NoiseResult noise_augment(const std::vector<LabeledExample>& examples,
                          const NoiseSpec& spec, std::size_t round) {
  spec.validate();
  enum class Edit { kNone, kSwap, kDelete, kDuplicate };
  std::vector<Edit> enabled;
  if (spec.swap) enabled.push_back(Edit::kSwap);
  if (spec.remove) enabled.push_back(Edit::kDelete);
  if (spec.duplicate) enabled.push_back(Edit::kDuplicate);

  NoiseResult result;
  result.examples.reserve(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const LabeledExample& e = examples[i];
    Rng rng(mix_seed(mix_seed(spec.seed, round), i));
    std::vector<std::string> tokens = split_whitespace(e.text);
    std::vector<Edit> edits(tokens.size(), Edit::kNone);
    for (Edit& edit : edits) {
      if (rng.bernoulli(spec.probability)) {
        edit = enabled[rng.below(enabled.size())];
        ++result.tokens_hit;
      }
    }
    result.tokens_seen += tokens.size();

    for (std::size_t t = 0; t + 1 < tokens.size(); ++t) {
      if (edits[t] == Edit::kSwap) {
        std::swap(tokens[t], tokens[t + 1]);
        std::swap(edits[t], edits[t + 1]);
        ++t;  // the pair is done
      }
    }
    std::vector<std::string> out;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      if (edits[t] == Edit::kDelete) continue;
      out.push_back(tokens[t]);
      if (edits[t] == Edit::kDuplicate) out.push_back(tokens[t]);
    }
    if (out.empty() && !tokens.empty()) out.push_back(tokens.front());

    LabeledExample n = e;
    n.id = e.id + "~nz" + std::to_string(round);
    n.text = tokens.empty() ? e.text : join(out);
    n.provenance = Provenance::kNoise;
    result.examples.push_back(std::move(n));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Published figures

namespace {

struct PublishedRow {
  Language language;
  ClassCounts train;
  ClassCounts test;
  ClassCounts semi_noisy_train;
  ClassCounts stated_additions;
};

constexpr PublishedRow kPublished[] = {
    {Language::kEnglish, {3375, 453, 435}, {836, 117, 113}, {3375, 2251, 2546}, {0, 1798, 2093}},
    {Language::kHindi, {2245, 829, 910}, {578, 211, 208}, {2245, 3497, 1810}, {0, 2668, 900}},
    {Language::kBangla, {2078, 898, 850}, {522, 218, 217}, {2078, 1959, 1966}, {0, 1061, 1116}},
};

constexpr ClassCounts kFullyTranslated = {4373, 2156, 2185};

const PublishedRow& published(Language language) {
  for (const auto& r : kPublished)
    if (r.language == language) return r;
  throw DomainError("no published figures for language");
}

}  // namespace

ClassCounts published_raw_counts(Language language, CorpusSet set) {
  const auto& r = published(language);
  return set == CorpusSet::kTrain ? r.train : r.test;
}

ClassCounts published_semi_noisy_counts(Language language) {
  return published(language).semi_noisy_train;
}

ClassCounts published_fully_translated_counts() { return kFullyTranslated; }

ClassCounts stated_additions(Language language) {
  return published(language).stated_additions;
}

AugmentationTargets published_targets() {
  AugmentationTargets t;
  for (const auto& r : kPublished) {
    ClassCounts add{};
    for (std::size_t k = 0; k < kNumLabels; ++k)
      add[k] = r.semi_noisy_train[k] - r.train[k];
    t[r.language] = add;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Corpus construction

Corpus build_semi_noisy(const Corpus& raw,
                        const std::vector<LabeledExample>& pool,
                        const AugmentationTargets& targets) {
  Corpus out;
  std::string shortfall;
  for (const auto& [language, splits] : raw) {
    CorpusSplits built{splits.train, splits.test};
    auto it = targets.find(language);
    if (it != targets.end()) {
      ClassCounts need = it->second;
      for (const LabeledExample& e : pool) {
        const auto k = static_cast<std::size_t>(e.label);
        if (e.language != language || need[k] == 0) continue;
        built.train.examples.push_back(e);
        --need[k];
      }
      for (std::size_t k = 0; k < kNumLabels; ++k) {
        if (need[k] == 0) continue;
        if (!shortfall.empty()) shortfall += "; ";
        shortfall += std::string(language_name(language)) + " " +
                     std::string(label_name(label_from_index(k))) + " short by " +
                     std::to_string(need[k]) + " of " + std::to_string(it->second[k]);
      }
    }
    built.train.name = std::string(language_name(language)) + "-train-semi-noisy";
    built.train.recount();
    out[language] = std::move(built);
  }
  if (!shortfall.empty())
    throw AugmentationError("augmentation pool too small: " + shortfall);
  return out;
}

std::vector<LabeledExample> build_augmentation_pool(
    const Corpus& raw, const TranslatorClient& client,
    const AugmentationTargets& targets, const NoiseSpec& noise,
    std::size_t jobs) {
  std::vector<LabeledExample> pool;
  for (const auto& [language, splits] : raw) {
    auto it = targets.find(language);
    if (it == targets.end()) continue;
    // Only classes that need samples are worth translating.
    ClassCounts available{};
    for (const auto& [other, other_splits] : raw) {
      if (other == language) continue;
      std::vector<LabeledExample> wanted;
      for (const auto& e : other_splits.train.examples)
        if (it->second[static_cast<std::size_t>(e.label)] > 0) wanted.push_back(e);
      for (auto& e : translate_augment(wanted, client, other, language, jobs)) {
        ++available[static_cast<std::size_t>(e.label)];
        pool.push_back(std::move(e));
      }
    }
    std::size_t rounds = 0;
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      const std::size_t need = it->second[k] > available[k] ? it->second[k] - available[k] : 0;
      const std::size_t have = splits.train.counts[k];
      if (need > 0 && have > 0) rounds = std::max(rounds, (need + have - 1) / have);
    }
    for (std::size_t r = 0; r < rounds; ++r) {
      std::vector<LabeledExample> wanted;
      for (const auto& e : splits.train.examples)
        if (it->second[static_cast<std::size_t>(e.label)] > 0) wanted.push_back(e);
      NoiseSpec spec = noise;
      spec.seed = mix_seed(noise.seed, static_cast<std::uint64_t>(language));
      for (auto& e : noise_augment(wanted, spec, r).examples) pool.push_back(std::move(e));
    }
  }
  return pool;
}

DatasetSplit build_fully_translated(const Corpus& raw,
                                    const TranslatorClient& client,
                                    std::size_t jobs) {
  std::vector<LabeledExample> out;
  for (Language source : {Language::kHindi, Language::kBangla}) {
    auto it = raw.find(source);
    if (it == raw.end())
      throw AugmentationError("fully translated corpus needs the " +
                              std::string(language_name(source)) + " splits");
    std::vector<LabeledExample> chosen;
    for (const auto& e : it->second.train.examples) chosen.push_back(e);
    for (const auto& e : it->second.test.examples)
      if (e.label != Label::kNag) chosen.push_back(e);
    for (auto& e : translate_augment(chosen, client, source, Language::kEnglish, jobs))
      out.push_back(std::move(e));
  }
  return DatasetSplit::from_examples("english-train-fully-translated", std::move(out));
}

// ---------------------------------------------------------------------------
// Reconciliation

namespace {

ClassCounts fully_translated_enumeration() {
  ClassCounts c{};
  for (Language l : {Language::kHindi, Language::kBangla}) {
    const ClassCounts train = published_raw_counts(l, CorpusSet::kTrain);
    const ClassCounts test = published_raw_counts(l, CorpusSet::kTest);
    c[0] += train[0];
    c[1] += train[1] + test[1];
    c[2] += train[2] + test[2];
  }
  return c;
}

void add_rows(ReconciliationReport& report, const std::string& corpus,
              const std::string& set, const ClassCounts& published,
              const ClassCounts& built, const ClassCounts* stated,
              const std::string& stated_source) {
  for (std::size_t k = 0; k <= kNumLabels; ++k) {
    ReconciliationRow row;
    row.corpus = corpus;
    row.set = set;
    const bool total = k == kNumLabels;
    row.label = total ? "total" : std::string(label_name(label_from_index(k)));
    row.published = total ? count_total(published) : published[k];
    row.built = total ? count_total(built) : built[k];
    if (stated) {
      const std::size_t s = total ? count_total(*stated) : (*stated)[k];
      if (s != row.published) {
        row.stated = s;
        row.note = stated_source + " gives " + std::to_string(s) + ", table gives " +
                   std::to_string(row.published) + " (difference " +
                   std::to_string(row.published > s ? row.published - s : s - row.published) +
                   ")";
      }
    }
    if (row.built != row.published) {
      if (!row.note.empty()) row.note += "; ";
      row.note += "built corpus has " + std::to_string(row.built);
    }
    report.rows.push_back(std::move(row));
  }
}

}  // namespace

std::vector<ReconciliationRow> ReconciliationReport::flagged() const {
  std::vector<ReconciliationRow> out;
  for (const auto& r : rows)
    if (r.flagged()) out.push_back(r);
  return out;
}

nlohmann::json ReconciliationReport::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j = {{"corpus", r.corpus}, {"set", r.set},
                        {"label", r.label}, {"published", r.published},
                        {"built", r.built}, {"flagged", r.flagged()}};
    if (r.stated) j["stated"] = *r.stated;
    if (!r.note.empty()) j["note"] = r.note;
    rows_json.push_back(std::move(j));
  }
  return {{"rows", rows_json}, {"flagged", flagged().size()}};
}

std::string ReconciliationReport::to_text() const {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-17s %-14s %-6s %10s %10s  %s\n", "corpus",
                "set", "label", "published", "built", "note");
  out += line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-17s %-14s %-6s %10zu %10zu  %s%s\n",
                  r.corpus.c_str(), r.set.c_str(), r.label.c_str(), r.published,
                  r.built, r.flagged() ? "FLAG " : "", r.note.c_str());
    out += line;
  }
  return out;
}

ReconciliationReport reconcile(const Corpus& semi_noisy,
                               const DatasetSplit* fully_translated) {
  ReconciliationReport report;
  for (Language l : kLanguages) {
    auto it = semi_noisy.find(l);
    if (it == semi_noisy.end()) continue;
    const std::string lang(language_name(l));
    ClassCounts stated = published_raw_counts(l, CorpusSet::kTrain);
    const ClassCounts add = stated_additions(l);
    for (std::size_t k = 0; k < kNumLabels; ++k) stated[k] += add[k];
    add_rows(report, "semi-noisy", lang + "-train", published_semi_noisy_counts(l),
             it->second.train.counts, &stated, "raw plus stated additions");
    add_rows(report, "semi-noisy", lang + "-test",
             published_raw_counts(l, CorpusSet::kTest), it->second.test.counts,
             nullptr, "");
  }
  if (fully_translated) {
    const ClassCounts enumerated = fully_translated_enumeration();
    add_rows(report, "fully-translated", "english-train",
             published_fully_translated_counts(), fully_translated->counts,
             &enumerated, "per-source enumeration");
  }
  return report;
}

// ---------------------------------------------------------------------------
// Fixtures

namespace {

// Parallel word lists: entry i means the same thing in every language.
constexpr std::array<std::string_view, 16> kEnglishWords = {
    "people", "country", "video", "woman", "brother", "song",  "work",  "truth",
    "shame",  "good",    "bad",   "love",  "speak",   "watch", "leave", "always"};
constexpr std::array<std::string_view, 16> kHindiWords = {
    "लोग", "देश", "वीडियो", "महिला", "भाई", "गाना", "काम", "सच",
    "शर्म", "अच्छा", "बुरा", "प्यार", "बोलो", "देखो", "जाओ", "हमेशा"};
constexpr std::array<std::string_view, 16> kBanglaWords = {
    "মানুষ", "দেশ", "ভিডিও", "মহিলা", "ভাই", "গান", "কাজ", "সত্য",
    "লজ্জা", "ভালো", "খারাপ", "ভালোবাসা", "বলো", "দেখো", "যাও", "সবসময়"};

const std::array<std::string_view, 16>& words_for(Language l) {
  switch (l) {
    case Language::kEnglish: return kEnglishWords;
    case Language::kHindi: return kHindiWords;
    case Language::kBangla: return kBanglaWords;
  }
  return kEnglishWords;
}

DatasetSplit fixture_split(Language language, CorpusSet set, std::uint64_t seed) {
  const ClassCounts counts = published_raw_counts(language, set);
  const auto& words = words_for(language);
  const std::string prefix = std::string(language_code(language)) +
                             (set == CorpusSet::kTrain ? "-train-" : "-test-");
  Rng rng(seed);
  std::vector<LabeledExample> examples;
  std::size_t serial = 0;
  for (std::size_t k = 0; k < kNumLabels; ++k) {
    for (std::size_t n = 0; n < counts[k]; ++n) {
      std::vector<std::string> tokens;
      const std::size_t len = 4 + rng.below(6);
      for (std::size_t t = 0; t < len; ++t)
        tokens.emplace_back(words[rng.below(words.size())]);
      char id[16];
      std::snprintf(id, sizeof id, "%05zu", ++serial);
      examples.push_back({prefix + id, join(tokens), label_from_index(k), language,
                          Provenance::kRaw});
    }
  }
  // Interleave classes so the files do not look sorted.
  rng.shuffle(examples.begin(), examples.end());
  return DatasetSplit::from_examples(prefix.substr(0, prefix.size() - 1),
                                     std::move(examples));
}

std::filesystem::path split_path(const std::filesystem::path& dir, Language l,
                                 CorpusSet set) {
  return dir / (std::string(language_name(l)) +
                (set == CorpusSet::kTrain ? "_train.csv" : "_test.csv"));
}

}  // namespace

nlohmann::json fixture_dictionary() {
  nlohmann::json j = nlohmann::json::object();
  for (Language src : kLanguages) {
    for (Language dst : kLanguages) {
      if (src == dst) continue;
      nlohmann::json map = nlohmann::json::object();
      for (std::size_t i = 0; i < kEnglishWords.size(); ++i)
        map[std::string(words_for(src)[i])] = std::string(words_for(dst)[i]);
      j[pair_key(src, dst)] = std::move(map);
    }
  }
  return j;
}

void write_table_fixture(const std::filesystem::path& dir, std::uint64_t seed) {
  Corpus corpus;
  std::uint64_t stream = 0;
  for (Language l : kLanguages) {
    corpus[l].train = fixture_split(l, CorpusSet::kTrain, mix_seed(seed, stream++));
    corpus[l].test = fixture_split(l, CorpusSet::kTest, mix_seed(seed, stream++));
  }
  write_corpus(dir, corpus);
  write_file_atomic(dir / "dictionary.json", fixture_dictionary().dump(1) + "\n");
}

Corpus load_corpus(const std::filesystem::path& dir) {
  Corpus corpus;
  for (Language l : kLanguages) {
    corpus[l].train = load_trac2(split_path(dir, l, CorpusSet::kTrain), l);
    corpus[l].test = load_trac2(split_path(dir, l, CorpusSet::kTest), l);
  }
  return corpus;
}

void write_corpus(const std::filesystem::path& dir, const Corpus& corpus) {
  for (const auto& [l, splits] : corpus) {
    write_file_atomic(split_path(dir, l, CorpusSet::kTrain), format_trac2(splits.train));
    write_file_atomic(split_path(dir, l, CorpusSet::kTest), format_trac2(splits.test));
  }
}

}  // namespace tla
