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

#ifndef TLA_SYNTHETIC_H_
#define TLA_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tla/text.h"

namespace tla {

// Template corpus for desk-scale runs: short sentences of shared filler
// words with one class-specific marker token at a random position.
DatasetSplit synthetic_corpus(std::size_t per_class = 20, std::uint64_t seed = 7);

// Two disjoint 10-word topics; every sentence draws all of its words from
// one topic. Token ids 2..11 belong to topic A, 12..21 to topic B (0 and 1
// are PAD and UNK).
struct TopicCorpus {
  std::vector<TokenIds> sentences;
  std::vector<std::size_t> counts;  // per id, for negative sampling
  std::vector<std::size_t> topic_a;
  std::vector<std::size_t> topic_b;
};
TopicCorpus two_topic_corpus(std::size_t sentences, std::size_t length,
                             std::uint64_t seed);

}  // namespace tla

#endif  // TLA_SYNTHETIC_H_
