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

#ifndef TLA_WORD2VEC_H_
#define TLA_WORD2VEC_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tla/layers.h"
#include "tla/tensor.h"

namespace tla {

struct Word2VecConfig {
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  std::size_t batch_size = 128;
  double lr_start = 0.025;
  double lr_end = 0.001;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kSamplingTableSize = 1 << 20;

// Slots filled in proportion to count^0.75. Throws ConfigError when every
// count is zero.
std::vector<std::size_t> build_sampling_table(std::span<const std::size_t> counts,
                                              std::size_t size = kSamplingTableSize);

struct Word2VecModel {
  Tensor input_embeddings;   // [vocab, dim], the word vectors
  Tensor output_embeddings;  // [vocab, dim], context vectors
  std::size_t negatives = 5;
  std::vector<std::size_t> sampling_table;

  // Input rows U(-0.5/dim, 0.5/dim), output rows zero. `counts` holds the
  // corpus frequency of each id and drives negative sampling.
  static Word2VecModel create(std::span<const std::size_t> counts,
                              std::size_t dim, std::size_t negatives,
                              std::uint64_t seed);

  std::size_t vocab_size() const { return input_embeddings.dim(0); }
  std::size_t dim() const { return input_embeddings.dim(1); }
  void append_to(ParameterList& out, const std::string& prefix) const;
};

// -log s(u_ctx . v) - sum_n log s(-u_n . v) with v the center's input row and
// u the output rows.
double skipgram_pair_loss(const Word2VecModel& model, std::size_t center,
                          std::size_t context,
                          std::span<const std::size_t> negatives);

// Adds the pair's loss gradient into the embeddings' grad buffers and
// returns the loss.
double accumulate_pair_gradient(const Word2VecModel& model, std::size_t center,
                                std::size_t context,
                                std::span<const std::size_t> negatives);

struct SkipGramPair {
  std::size_t center = 0;
  std::size_t context = 0;
};

// Every (center, context) within `window` positions, padding skipped.
std::vector<SkipGramPair> skipgram_pairs(const std::vector<TokenIds>& corpus,
                                         std::size_t window);

struct Word2VecTrainReport {
  std::vector<double> epoch_mean_loss;
  std::size_t batches = 0;
};

// Shuffled mini-batches; each batch sums its pair gradients and takes one
// SGD step at the linearly decaying rate. Throws ConfigError when the
// vocabulary has fewer than negatives + 1 entries.
Word2VecTrainReport word2vec_train(Word2VecModel& model,
                                   const std::vector<TokenIds>& corpus,
                                   const Word2VecConfig& config);

// Mean input embedding over non-padding tokens; zero vector when every
// token is padding.
std::vector<double> word2vec_features(const Word2VecModel& model,
                                      std::span<const std::size_t> tokens);

std::vector<double> embedding_row(const Word2VecModel& model, std::size_t id);
double cosine_similarity(std::span<const double> a, std::span<const double> b);

}  // namespace tla

#endif  // TLA_WORD2VEC_H_
