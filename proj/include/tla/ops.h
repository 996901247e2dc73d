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

#ifndef TLA_OPS_H_
#define TLA_OPS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tla/tensor.h"

namespace tla {

enum class Activation { kIdentity, kTanh, kSigmoid, kRelu };

const char* activation_name(Activation kind);

// Differentiable primitives. Every op records at most one tape node and
// only when some input requires a gradient.

// [m,k] x [k,n] -> [m,n].
Tensor matmul(Tape& tape, const Tensor& a, const Tensor& b);
// [m,k] x [k] -> [m].
Tensor matvec(Tape& tape, const Tensor& m, const Tensor& x);
// W x + b.
Tensor linear(Tape& tape, const Tensor& w, const Tensor& x, const Tensor& b);
// W x + U h + b, the pre-activation of one recurrent gate.
Tensor gate_preactivation(Tape& tape, const Tensor& w, const Tensor& x,
                          const Tensor& u, const Tensor& h, const Tensor& b);
// Row-wise W m_t + b for every row of m: [T,in] -> [T,out].
Tensor linear_rows(Tape& tape, const Tensor& w, const Tensor& m,
                   const Tensor& b);
// Adds vector b to each row of m.
Tensor add_row_bias(Tape& tape, const Tensor& m, const Tensor& b);

Tensor add(Tape& tape, const Tensor& a, const Tensor& b);
Tensor sub(Tape& tape, const Tensor& a, const Tensor& b);
Tensor mul(Tape& tape, const Tensor& a, const Tensor& b);
Tensor scale(Tape& tape, const Tensor& a, double factor);
// Elementwise product with a constant mask (used for dropout).
Tensor mask_multiply(Tape& tape, const Tensor& x, std::vector<double> mask);

Tensor activation(Tape& tape, const Tensor& x, Activation kind);

// Softmax over a rank-1 tensor, computed after subtracting the maximum.
Tensor softmax(Tape& tape, const Tensor& x);

// Concatenation along `axis`; every other dimension must agree.
Tensor concat(Tape& tape, std::span<const Tensor> parts, std::size_t axis);
// Stacks equally sized rank-1 tensors into a [n, d] matrix.
Tensor stack_rows(Tape& tape, std::span<const Tensor> rows);
// Row i of a rank-2 tensor as a rank-1 tensor.
Tensor row(Tape& tape, const Tensor& m, std::size_t i);
// Tiles a rank-1 tensor into `count` identical rows.
Tensor repeat_rows(Tape& tape, const Tensor& v, std::size_t count);
// Gathers table rows by id. Gradients to `frozen_row` are dropped.
Tensor gather_rows(Tape& tape, const Tensor& table,
                   std::span<const std::size_t> ids,
                   std::optional<std::size_t> frozen_row = std::nullopt);
Tensor mean_rows(Tape& tape, const Tensor& m);

Tensor sum(Tape& tape, const Tensor& x);
Tensor dot(Tape& tape, const Tensor& a, const Tensor& b);
// sum_k weights[k] * vectors[k] for rank-1 weights of length K.
Tensor weighted_sum(Tape& tape, const Tensor& weights,
                    std::span<const Tensor> vectors);

}  // namespace tla

#endif  // TLA_OPS_H_
