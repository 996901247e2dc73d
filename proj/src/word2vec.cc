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

#include "tla/word2vec.h"

#include <cmath>
#include <unordered_set>

#include "tla/errors.h"
#include "tla/optim.h"
#include "tla/rng.h"

namespace tla {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(sigmoid(x)) without overflow for large |x|.
double log_sigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double row_dot(std::span<const double> a, std::size_t ra,
               std::span<const double> b, std::size_t rb, std::size_t dim) {
  double s = 0.0;
  for (std::size_t j = 0; j < dim; ++j) s += a[ra * dim + j] * b[rb * dim + j];
  return s;
}

void check_id(const Word2VecModel& m, std::size_t id) {
  if (id >= m.vocab_size()) {
    throw DomainError("token id " + std::to_string(id) +
                      " outside vocabulary of size " +
                      std::to_string(m.vocab_size()));
  }
}

}  // namespace

std::vector<std::size_t> build_sampling_table(std::span<const std::size_t> counts,
                                              std::size_t size) {
  double norm = 0.0;
  for (std::size_t c : counts) norm += std::pow(static_cast<double>(c), 0.75);
  if (norm == 0.0) throw ConfigError("negative sampling needs a non-empty corpus");
  std::vector<std::size_t> table;
  table.reserve(size);
  double cumulative = 0.0;
  std::size_t word = 0;
  while (word < counts.size() && counts[word] == 0) ++word;
  cumulative = std::pow(static_cast<double>(counts[word]), 0.75) / norm;
  for (std::size_t i = 0; i < size; ++i) {
    table.push_back(word);
    if (static_cast<double>(i + 1) / static_cast<double>(size) > cumulative) {
      do {
        ++word;
      } while (word < counts.size() && counts[word] == 0);
      if (word >= counts.size()) word = table.back();
      else cumulative += std::pow(static_cast<double>(counts[word]), 0.75) / norm;
    }
  }
  return table;
}

Word2VecModel Word2VecModel::create(std::span<const std::size_t> counts,
                                    std::size_t dim, std::size_t negatives,
                                    std::uint64_t seed) {
  if (dim == 0) throw ConfigError("word2vec dim must be >= 1");
  const std::size_t vocab = counts.size();
  if (vocab < negatives + 1) {
    throw ConfigError("word2vec vocabulary of " + std::to_string(vocab) +
                      " is smaller than negatives + 1 = " +
                      std::to_string(negatives + 1));
  }
  Rng rng(seed);
  Word2VecModel m;
  m.input_embeddings = uniform_parameter({vocab, dim}, 0.5 / dim, rng);
  m.output_embeddings = Tensor({vocab, dim}, true);
  m.negatives = negatives;
  m.sampling_table = build_sampling_table(counts);
  return m;
}

void Word2VecModel::append_to(ParameterList& out,
                              const std::string& prefix) const {
  out.push_back({prefix + "input", input_embeddings});
  out.push_back({prefix + "output", output_embeddings});
}

double skipgram_pair_loss(const Word2VecModel& model, std::size_t center,
                          std::size_t context,
                          std::span<const std::size_t> negatives) {
  check_id(model, center);
  check_id(model, context);
  const std::size_t d = model.dim();
  auto v = model.input_embeddings.values();
  auto u = model.output_embeddings.values();
  double loss = -log_sigmoid(row_dot(u, context, v, center, d));
  for (std::size_t n : negatives) {
    check_id(model, n);
    loss -= log_sigmoid(-row_dot(u, n, v, center, d));
  }
  return loss;
}

double accumulate_pair_gradient(const Word2VecModel& model, std::size_t center,
                                std::size_t context,
                                std::span<const std::size_t> negatives) {
  const double loss = skipgram_pair_loss(model, center, context, negatives);
  const std::size_t d = model.dim();
  auto v = model.input_embeddings.values();
  auto u = model.output_embeddings.values();
  auto gv = model.input_embeddings.grad();
  auto gu = model.output_embeddings.grad();
  // d/dx of -log s(x) is s(x) - 1; of -log s(-x) it is s(x).
  auto push = [&](std::size_t word, double coef) {
    for (std::size_t j = 0; j < d; ++j) {
      gv[center * d + j] += coef * u[word * d + j];
      gu[word * d + j] += coef * v[center * d + j];
    }
  };
  push(context, sigmoid(row_dot(u, context, v, center, d)) - 1.0);
  for (std::size_t n : negatives) push(n, sigmoid(row_dot(u, n, v, center, d)));
  return loss;
}

std::vector<SkipGramPair> skipgram_pairs(const std::vector<TokenIds>& corpus,
                                         std::size_t window) {
  std::vector<SkipGramPair> pairs;
  for (const TokenIds& doc : corpus) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (doc[i] == 0) continue;
      const std::size_t lo = i >= window ? i - window : 0;
      const std::size_t hi = std::min(doc.size(), i + window + 1);
      for (std::size_t j = lo; j < hi; ++j) {
        if (j == i || doc[j] == 0) continue;
        pairs.push_back({doc[i], doc[j]});
      }
    }
  }
  return pairs;
}

Word2VecTrainReport word2vec_train(Word2VecModel& model,
                                   const std::vector<TokenIds>& corpus,
                                   const Word2VecConfig& config) {
  if (model.vocab_size() < model.negatives + 1) {
    throw ConfigError("word2vec vocabulary of " +
                      std::to_string(model.vocab_size()) +
                      " is smaller than negatives + 1");
  }
  if (config.window == 0 || config.batch_size == 0 || config.epochs == 0)
    throw ConfigError("word2vec window, batch size and epochs must be >= 1");
  std::vector<SkipGramPair> pairs = skipgram_pairs(corpus, config.window);
  Word2VecTrainReport report;
  if (pairs.empty()) return report;

  const std::size_t per_epoch =
      (pairs.size() + config.batch_size - 1) / config.batch_size;
  const std::size_t total = per_epoch * config.epochs;
  LinearDecaySchedule schedule{config.lr_start, config.lr_end,
                               std::max<std::size_t>(1, total - 1)};
  const std::size_t d = model.dim();
  std::vector<std::size_t> negs(model.negatives);
  std::unordered_set<std::size_t> touched_in, touched_out;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    Rng rng(mix_seed(config.seed, epoch + 1));
    rng.shuffle(pairs.begin(), pairs.end());
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < pairs.size(); start += config.batch_size) {
      const std::size_t end = std::min(pairs.size(), start + config.batch_size);
      touched_in.clear();
      touched_out.clear();
      for (std::size_t p = start; p < end; ++p) {
        const SkipGramPair& pair = pairs[p];
        for (std::size_t& n : negs) {
          n = model.sampling_table[rng.below(model.sampling_table.size())];
          for (int tries = 0; n == pair.context && tries < 10; ++tries)
            n = model.sampling_table[rng.below(model.sampling_table.size())];
          touched_out.insert(n);
        }
        touched_in.insert(pair.center);
        touched_out.insert(pair.context);
        epoch_loss += accumulate_pair_gradient(model, pair.center, pair.context, negs);
      }
      const double lr = schedule.rate(report.batches);
      for (auto [tensor, rows] :
           {std::pair{&model.input_embeddings, &touched_in},
            std::pair{&model.output_embeddings, &touched_out}}) {
        auto w = tensor->values();
        auto g = tensor->grad();
        for (std::size_t r : *rows) {
          for (std::size_t j = 0; j < d; ++j) {
            if (!std::isfinite(g[r * d + j]))
              throw TrainingError("non-finite word2vec gradient at batch " +
                                  std::to_string(report.batches));
            w[r * d + j] -= lr * g[r * d + j];
            g[r * d + j] = 0.0;
          }
        }
      }
      ++report.batches;
    }
    report.epoch_mean_loss.push_back(epoch_loss / static_cast<double>(pairs.size()));
  }
  return report;
}

std::vector<double> word2vec_features(const Word2VecModel& model,
                                      std::span<const std::size_t> tokens) {
  const std::size_t d = model.dim();
  std::vector<double> out(d, 0.0);
  auto v = model.input_embeddings.values();
  std::size_t n = 0;
  for (std::size_t id : tokens) {
    if (id == 0) continue;
    check_id(model, id);
    for (std::size_t j = 0; j < d; ++j) out[j] += v[id * d + j];
    ++n;
  }
  if (n > 0)
    for (double& x : out) x /= static_cast<double>(n);
  return out;
}

std::vector<double> embedding_row(const Word2VecModel& model, std::size_t id) {
  check_id(model, id);
  auto v = model.input_embeddings.values();
  const std::size_t d = model.dim();
  return {v.begin() + static_cast<std::ptrdiff_t>(id * d),
          v.begin() + static_cast<std::ptrdiff_t>((id + 1) * d)};
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw DimensionError("cosine of vectors with different widths");
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  return ab / std::sqrt(aa * bb);
}

}  // namespace tla
