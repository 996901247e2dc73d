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

#ifndef TLA_LAYERS_H_
#define TLA_LAYERS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tla/ops.h"
#include "tla/rng.h"
#include "tla/tensor.h"

namespace tla {

using TokenIds = std::vector<std::size_t>;

// Trainable tensor with entries drawn from U(-bound, bound).
Tensor uniform_parameter(Shape shape, double bound, Rng& rng);

// Four-gate LSTM cell: input (i), forget (f), output (o) gates and the tanh
// candidate (g). W_* are hidden x input, U_* hidden x hidden.
struct LSTMCellParams {
  std::size_t input_size = 0;
  std::size_t hidden_size = 0;
  Tensor w_i, w_f, w_o, w_g;
  Tensor u_i, u_f, u_o, u_g;
  Tensor b_i, b_f, b_o, b_g;

  static LSTMCellParams zeros(std::size_t input_size, std::size_t hidden_size);
  // U(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, forget-gate bias = 1.
  static LSTMCellParams init(std::size_t input_size, std::size_t hidden_size,
                             Rng& rng);

  // Throws DimensionError naming the first gate whose tensors disagree with
  // the declared sizes.
  void validate() const;
  void append_to(ParameterList& out, const std::string& prefix) const;
};

struct LSTMState {
  Tensor h;
  Tensor c;

  static LSTMState zeros(std::size_t hidden_size);
};

LSTMState lstm_cell_step(Tape& tape, const LSTMCellParams& p, const Tensor& x,
                         const LSTMState& state);

// Layer k + 1 consumes the hidden sequence of layer k. Inverted dropout at
// `dropout` rate sits between consecutive layers.
struct StackedLSTMParams {
  std::vector<LSTMCellParams> layers;
  double dropout = 0.0;

  static StackedLSTMParams init(std::size_t input_size,
                                std::size_t hidden_size, std::size_t num_layers,
                                double dropout, Rng& rng);
  static StackedLSTMParams zeros(std::size_t input_size,
                                 std::size_t hidden_size,
                                 std::size_t num_layers);

  std::size_t input_size() const;
  std::size_t hidden_size() const;
  void validate() const;
  void append_to(ParameterList& out, const std::string& prefix) const;
};

struct LSTMOutput {
  Tensor hidden_sequence;  // [T, hidden] from the top layer
  std::vector<LSTMState> final_states;  // one per layer

  const Tensor& last_hidden() const { return final_states.back().h; }
};

// Unrolls the stack over a [T, input] sequence. Dropout masks are drawn from
// `seed` and only when `training` is set.
LSTMOutput lstm_forward(Tape& tape, const StackedLSTMParams& p,
                        const Tensor& sequence, bool training,
                        std::uint64_t seed);

struct BiLSTMOutput {
  // Step t is concat(forward[t], backward[T - 1 - t]); width 2 x hidden.
  Tensor sequence;
  // Hidden sequences in each direction's own processing order.
  Tensor forward_hidden;
  Tensor backward_hidden;
  // concat(final forward hidden, final backward hidden).
  Tensor summary;
};

BiLSTMOutput bilstm_forward(Tape& tape, const StackedLSTMParams& fwd,
                            const StackedLSTMParams& bwd,
                            const Tensor& sequence, bool training,
                            std::uint64_t seed);

// [T, D] tiling of a D-vector.
Tensor repeat_vector(Tape& tape, const Tensor& v, std::size_t steps);

// Reverses the row order of a [T, D] sequence.
Tensor reverse_rows(Tape& tape, const Tensor& sequence);

enum class DenseActivation { kLinear, kTanh, kSigmoid, kRelu, kSoftmax };

struct DenseParams {
  Tensor weights;  // [out, in]
  Tensor bias;     // [out]

  static DenseParams init(std::size_t in, std::size_t out, Rng& rng);
  static DenseParams zeros(std::size_t in, std::size_t out);
  std::size_t in() const { return weights.dim(1); }
  std::size_t out() const { return weights.dim(0); }
  void append_to(ParameterList& out, const std::string& prefix) const;
};

Tensor dense_forward(Tape& tape, const Tensor& weights, const Tensor& bias,
                     const Tensor& x, DenseActivation activation);
inline Tensor dense_forward(Tape& tape, const DenseParams& p, const Tensor& x,
                            DenseActivation activation) {
  return dense_forward(tape, p.weights, p.bias, x, activation);
}

// Inverted dropout: zero with probability `rate`, scale survivors by
// 1 / (1 - rate). Identity when rate == 0.
Tensor dropout(Tape& tape, const Tensor& x, double rate, Rng& rng);

// vocab x dim lookup table whose padding row is pinned at zero.
struct EmbeddingTable {
  Tensor table;
  std::size_t padding_id = 0;

  // fan_in of the lookup (viewed as a linear map from one-hot input) is the
  // vocabulary size.
  static EmbeddingTable init(std::size_t vocab_size, std::size_t dim,
                             Rng& rng);
  std::size_t vocab_size() const { return table.dim(0); }
  std::size_t dim() const { return table.dim(1); }
  void append_to(ParameterList& out, const std::string& prefix) const;
};

// [T, dim] rows for the given ids. Out-of-range ids throw DomainError.
Tensor embedding_lookup(Tape& tape, const EmbeddingTable& table,
                        std::span<const std::size_t> ids);

}  // namespace tla

#endif  // TLA_LAYERS_H_
