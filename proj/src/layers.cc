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

#include "tla/layers.h"

#include <cmath>

#include "tla/errors.h"

namespace tla {

Tensor uniform_parameter(Shape shape, double bound, Rng& rng) {
  std::vector<double> values(shape_numel(shape));
  for (double& v : values) v = rng.uniform(-bound, bound);
  return Tensor(std::move(shape), std::move(values), true);
}

namespace {

Tensor zero_parameter(Shape shape) { return Tensor(std::move(shape), true); }

void check_gate(const char* gate, const Tensor& w, const Tensor& u,
                const Tensor& b, std::size_t in, std::size_t hidden) {
  const bool ok = w.shape() == Shape{hidden, in} &&
                  u.shape() == Shape{hidden, hidden} &&
                  b.shape() == Shape{hidden};
  if (!ok) {
    throw DimensionError(std::string("LSTM gate '") + gate + "': W " +
                         shape_string(w.shape()) + ", U " +
                         shape_string(u.shape()) + ", b " +
                         shape_string(b.shape()) + " do not match input " +
                         std::to_string(in) + " / hidden " +
                         std::to_string(hidden));
  }
}

}  // namespace

LSTMCellParams LSTMCellParams::zeros(std::size_t input_size,
                                     std::size_t hidden_size) {
  LSTMCellParams p;
  p.input_size = input_size;
  p.hidden_size = hidden_size;
  for (Tensor* w : {&p.w_i, &p.w_f, &p.w_o, &p.w_g})
    *w = zero_parameter({hidden_size, input_size});
  for (Tensor* u : {&p.u_i, &p.u_f, &p.u_o, &p.u_g})
    *u = zero_parameter({hidden_size, hidden_size});
  for (Tensor* b : {&p.b_i, &p.b_f, &p.b_o, &p.b_g})
    *b = zero_parameter({hidden_size});
  return p;
}

LSTMCellParams LSTMCellParams::init(std::size_t input_size,
                                    std::size_t hidden_size, Rng& rng) {
  LSTMCellParams p;
  p.input_size = input_size;
  p.hidden_size = hidden_size;
  const double in_bound = 1.0 / std::sqrt(static_cast<double>(input_size));
  const double hid_bound = 1.0 / std::sqrt(static_cast<double>(hidden_size));
  for (Tensor* w : {&p.w_i, &p.w_f, &p.w_o, &p.w_g})
    *w = uniform_parameter({hidden_size, input_size}, in_bound, rng);
  for (Tensor* u : {&p.u_i, &p.u_f, &p.u_o, &p.u_g})
    *u = uniform_parameter({hidden_size, hidden_size}, hid_bound, rng);
  for (Tensor* b : {&p.b_i, &p.b_f, &p.b_o, &p.b_g})
    *b = uniform_parameter({hidden_size}, hid_bound, rng);
  for (double& v : p.b_f.values()) v = 1.0;
  return p;
}

void LSTMCellParams::validate() const {
  check_gate("i", w_i, u_i, b_i, input_size, hidden_size);
  check_gate("f", w_f, u_f, b_f, input_size, hidden_size);
  check_gate("o", w_o, u_o, b_o, input_size, hidden_size);
  check_gate("g", w_g, u_g, b_g, input_size, hidden_size);
}

void LSTMCellParams::append_to(ParameterList& out,
                               const std::string& prefix) const {
  out.push_back({prefix + "W_i", w_i});
  out.push_back({prefix + "W_f", w_f});
  out.push_back({prefix + "W_o", w_o});
  out.push_back({prefix + "W_g", w_g});
  out.push_back({prefix + "U_i", u_i});
  out.push_back({prefix + "U_f", u_f});
  out.push_back({prefix + "U_o", u_o});
  out.push_back({prefix + "U_g", u_g});
  out.push_back({prefix + "b_i", b_i});
  out.push_back({prefix + "b_f", b_f});
  out.push_back({prefix + "b_o", b_o});
  out.push_back({prefix + "b_g", b_g});
}

LSTMState LSTMState::zeros(std::size_t hidden_size) {
  return {Tensor(Shape{hidden_size}), Tensor(Shape{hidden_size})};
}

LSTMState lstm_cell_step(Tape& tape, const LSTMCellParams& p, const Tensor& x,
                         const LSTMState& state) {
  p.validate();
  if (x.shape() != Shape{p.input_size}) {
    throw DimensionError("LSTM input " + shape_string(x.shape()) +
                         " does not match input size " +
                         std::to_string(p.input_size));
  }
  if (state.h.shape() != Shape{p.hidden_size} ||
      state.c.shape() != Shape{p.hidden_size}) {
    throw DimensionError("LSTM state h " + shape_string(state.h.shape()) +
                         ", c " + shape_string(state.c.shape()) +
                         " does not match hidden size " +
                         std::to_string(p.hidden_size));
  }
  const Tensor& h = state.h;
  Tensor i = activation(tape, gate_preactivation(tape, p.w_i, x, p.u_i, h, p.b_i),
                        Activation::kSigmoid);
  Tensor f = activation(tape, gate_preactivation(tape, p.w_f, x, p.u_f, h, p.b_f),
                        Activation::kSigmoid);
  Tensor o = activation(tape, gate_preactivation(tape, p.w_o, x, p.u_o, h, p.b_o),
                        Activation::kSigmoid);
  Tensor g = activation(tape, gate_preactivation(tape, p.w_g, x, p.u_g, h, p.b_g),
                        Activation::kTanh);
  Tensor c_next = add(tape, mul(tape, f, state.c), mul(tape, i, g));
  Tensor h_next = mul(tape, o, activation(tape, c_next, Activation::kTanh));
  return {h_next, c_next};
}

StackedLSTMParams StackedLSTMParams::init(std::size_t input_size,
                                          std::size_t hidden_size,
                                          std::size_t num_layers,
                                          double dropout, Rng& rng) {
  if (num_layers == 0) throw ConfigError("stacked LSTM needs >= 1 layer");
  StackedLSTMParams p;
  p.dropout = dropout;
  for (std::size_t k = 0; k < num_layers; ++k)
    p.layers.push_back(
        LSTMCellParams::init(k == 0 ? input_size : hidden_size, hidden_size, rng));
  return p;
}

StackedLSTMParams StackedLSTMParams::zeros(std::size_t input_size,
                                           std::size_t hidden_size,
                                           std::size_t num_layers) {
  StackedLSTMParams p;
  for (std::size_t k = 0; k < num_layers; ++k)
    p.layers.push_back(
        LSTMCellParams::zeros(k == 0 ? input_size : hidden_size, hidden_size));
  return p;
}

std::size_t StackedLSTMParams::input_size() const {
  return layers.front().input_size;
}

std::size_t StackedLSTMParams::hidden_size() const {
  return layers.back().hidden_size;
}

void StackedLSTMParams::validate() const {
  if (layers.empty()) throw ConfigError("stacked LSTM has no layers");
  if (dropout < 0 || dropout >= 1) {
    throw ConfigError("dropout rate must lie in [0, 1), got " +
                      std::to_string(dropout));
  }
  for (std::size_t k = 0; k < layers.size(); ++k) {
    layers[k].validate();
    if (k > 0 && layers[k].input_size != layers[k - 1].hidden_size) {
      throw DimensionError("stacked LSTM layer " + std::to_string(k) +
                           " expects input " +
                           std::to_string(layers[k].input_size) +
                           " but layer below has hidden " +
                           std::to_string(layers[k - 1].hidden_size));
    }
  }
}

void StackedLSTMParams::append_to(ParameterList& out,
                                  const std::string& prefix) const {
  for (std::size_t k = 0; k < layers.size(); ++k)
    layers[k].append_to(out, prefix + "l" + std::to_string(k) + ".");
}

LSTMOutput lstm_forward(Tape& tape, const StackedLSTMParams& p,
                        const Tensor& sequence, bool training,
                        std::uint64_t seed) {
  p.validate();
  if (sequence.rank() != 2 || sequence.dim(0) == 0) {
    throw DomainError("lstm_forward needs a non-empty [T, D] sequence, got " +
                      shape_string(sequence.shape()));
  }
  const std::size_t steps = sequence.dim(0);
  LSTMOutput out;
  Tensor layer_input = sequence;
  for (std::size_t k = 0; k < p.layers.size(); ++k) {
    const LSTMCellParams& cell = p.layers[k];
    LSTMState state = LSTMState::zeros(cell.hidden_size);
    std::vector<Tensor> hidden;
    hidden.reserve(steps);
    for (std::size_t t = 0; t < steps; ++t) {
      state = lstm_cell_step(tape, cell, row(tape, layer_input, t), state);
      hidden.push_back(state.h);
    }
    out.final_states.push_back(state);
    layer_input = stack_rows(tape, hidden);
    if (training && p.dropout > 0 && k + 1 < p.layers.size()) {
      Rng rng(mix_seed(seed, k));
      layer_input = dropout(tape, layer_input, p.dropout, rng);
    }
  }
  out.hidden_sequence = layer_input;
  return out;
}

Tensor reverse_rows(Tape& tape, const Tensor& sequence) {
  const std::size_t steps = sequence.dim(0);
  std::vector<Tensor> rows;
  rows.reserve(steps);
  for (std::size_t t = steps; t-- > 0;) rows.push_back(row(tape, sequence, t));
  return stack_rows(tape, rows);
}

BiLSTMOutput bilstm_forward(Tape& tape, const StackedLSTMParams& fwd,
                            const StackedLSTMParams& bwd,
                            const Tensor& sequence, bool training,
                            std::uint64_t seed) {
  fwd.validate();
  bwd.validate();
  if (fwd.hidden_size() != bwd.hidden_size()) {
    throw DimensionError("bidirectional LSTM hidden sizes differ: forward " +
                         std::to_string(fwd.hidden_size()) + ", backward " +
                         std::to_string(bwd.hidden_size()));
  }
  if (sequence.rank() != 2 || sequence.dim(0) == 0) {
    throw DomainError("bilstm_forward needs a non-empty [T, D] sequence");
  }
  LSTMOutput f = lstm_forward(tape, fwd, sequence, training, mix_seed(seed, 0));
  LSTMOutput b = lstm_forward(tape, bwd, reverse_rows(tape, sequence), training,
                              mix_seed(seed, 1));
  BiLSTMOutput out;
  out.forward_hidden = f.hidden_sequence;
  out.backward_hidden = b.hidden_sequence;
  const Tensor aligned[] = {f.hidden_sequence,
                            reverse_rows(tape, b.hidden_sequence)};
  out.sequence = concat(tape, aligned, 1);
  const Tensor finals[] = {f.last_hidden(), b.last_hidden()};
  out.summary = concat(tape, finals, 0);
  return out;
}

Tensor repeat_vector(Tape& tape, const Tensor& v, std::size_t steps) {
  return repeat_rows(tape, v, steps);
}

DenseParams DenseParams::init(std::size_t in, std::size_t out, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  DenseParams p;
  p.weights = uniform_parameter({out, in}, bound, rng);
  p.bias = uniform_parameter({out}, bound, rng);
  return p;
}

DenseParams DenseParams::zeros(std::size_t in, std::size_t out) {
  return {zero_parameter({out, in}), zero_parameter({out})};
}

void DenseParams::append_to(ParameterList& out,
                            const std::string& prefix) const {
  out.push_back({prefix + "W", weights});
  out.push_back({prefix + "b", bias});
}

Tensor dense_forward(Tape& tape, const Tensor& weights, const Tensor& bias,
                     const Tensor& x, DenseActivation act) {
  Tensor z = linear(tape, weights, x, bias);
  switch (act) {
    case DenseActivation::kLinear:
      return z;
    case DenseActivation::kTanh:
      return activation(tape, z, Activation::kTanh);
    case DenseActivation::kSigmoid:
      return activation(tape, z, Activation::kSigmoid);
    case DenseActivation::kRelu:
      return activation(tape, z, Activation::kRelu);
    case DenseActivation::kSoftmax:
      return softmax(tape, z);
  }
  return z;
}

Tensor dropout(Tape& tape, const Tensor& x, double rate, Rng& rng) {
  if (rate <= 0) return x;
  if (rate >= 1) throw ConfigError("dropout rate must be below 1");
  const double keep_scale = 1.0 / (1.0 - rate);
  std::vector<double> mask(x.numel());
  for (double& m : mask) m = rng.bernoulli(rate) ? 0.0 : keep_scale;
  return mask_multiply(tape, x, std::move(mask));
}

EmbeddingTable EmbeddingTable::init(std::size_t vocab_size, std::size_t dim,
                                    Rng& rng) {
  EmbeddingTable t;
  const double bound = 1.0 / std::sqrt(static_cast<double>(vocab_size));
  t.table = uniform_parameter({vocab_size, dim}, bound, rng);
  for (std::size_t c = 0; c < dim; ++c) t.table.values()[c] = 0.0;
  t.padding_id = 0;
  return t;
}

void EmbeddingTable::append_to(ParameterList& out,
                               const std::string& prefix) const {
  out.push_back({prefix + "table", table});
}

Tensor embedding_lookup(Tape& tape, const EmbeddingTable& table,
                        std::span<const std::size_t> ids) {
  return gather_rows(tape, table.table, ids, table.padding_id);
}

}  // namespace tla
