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

#include "tla/synthetic.h"

#include <array>
#include <cstdio>

#include "tla/rng.h"

namespace tla {

namespace {

constexpr std::array<const char*, 10> kFiller = {
    "the", "you", "this", "post", "is", "people", "what", "really", "about",
    "video"};

constexpr std::array<std::array<const char*, 4>, kNumLabels> kMarkers = {{
    {"thanks", "lovely", "agree", "helpful"},  // NAG
    {"idiot", "stupid", "shut", "trash"},      // OAG
    {"sure", "genius", "clearly", "wow"},      // CAG
}};

}  // namespace

DatasetSplit synthetic_corpus(std::size_t per_class, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledExample> examples;
  for (std::size_t i = 0; i < per_class; ++i) {
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      const std::size_t length = 3 + rng.below(3);
      std::vector<std::string> words;
      for (std::size_t j = 0; j < length; ++j)
        words.emplace_back(kFiller[rng.below(kFiller.size())]);
      words[rng.below(length)] = kMarkers[k][rng.below(kMarkers[k].size())];
      std::string text;
      for (const std::string& w : words) text += (text.empty() ? "" : " ") + w;
      char id[32];
      std::snprintf(id, sizeof id, "syn-%03zu", examples.size() + 1);
      examples.push_back({id, text, label_from_index(k), Language::kEnglish,
                          Provenance::kRaw});
    }
  }
  return DatasetSplit::from_examples("synthetic", std::move(examples));
}

TopicCorpus two_topic_corpus(std::size_t sentences, std::size_t length,
                             std::uint64_t seed) {
  TopicCorpus c;
  for (std::size_t i = 0; i < 10; ++i) {
    c.topic_a.push_back(2 + i);
    c.topic_b.push_back(12 + i);
  }
  c.counts.assign(22, 0);
  Rng rng(seed);
  for (std::size_t s = 0; s < sentences; ++s) {
    const auto& topic = s % 2 == 0 ? c.topic_a : c.topic_b;
    TokenIds ids;
    for (std::size_t j = 0; j < length; ++j) {
      ids.push_back(topic[rng.below(topic.size())]);
      ++c.counts[ids.back()];
    }
    c.sentences.push_back(std::move(ids));
  }
  return c;
}

}  // namespace tla
