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

#include "tla/ops.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "tla/errors.h"

namespace tla {
namespace {

void require_rank(const Tensor& t, std::size_t rank, const char* op,
                  const char* operand) {
  if (t.rank() != rank) {
    throw DimensionError(std::string(op) + ": " + operand + " must be rank " +
                         std::to_string(rank) + ", got shape " +
                         shape_string(t.shape()));
  }
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shapes " +
                         shape_string(a.shape()) + " and " +
                         shape_string(b.shape()) + " differ");
  }
}

std::vector<std::uint64_t> ids_of(std::span<const Tensor> ts) {
  std::vector<std::uint64_t> ids;
  ids.reserve(ts.size());
  for (const Tensor& t : ts) ids.push_back(t.id());
  return ids;
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

const char* activation_name(Activation kind) {
  switch (kind) {
    case Activation::kIdentity:
      return "identity";
    case Activation::kTanh:
      return "tanh";
    case Activation::kSigmoid:
      return "sigmoid";
    case Activation::kRelu:
      return "relu";
  }
  return "?";
}

Tensor matmul(Tape& tape, const Tensor& a, const Tensor& b) {
  require_rank(a, 2, "matmul", "a");
  require_rank(b, 2, "matmul", "b");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) {
    throw DimensionError("matmul: shapes " + shape_string(a.shape()) +
                         " and " + shape_string(b.shape()) +
                         " are not aligned");
  }
  Tensor out(Shape{m, n});
  auto av = a.values();
  auto bv = b.values();
  auto ov = out.values();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = av[i * k + p];
      for (std::size_t j = 0; j < n; ++j) ov[i * n + j] += aip * bv[p * n + j];
    }
  }
  if (tape.wants({&a, &b})) {
    out.set_requires_grad(true);
    tape.record({a.id(), b.id()}, out, [a, b, out, m, k, n]() mutable {
      auto g = out.grad();
      if (a.requires_grad()) {
        auto ag = a.grad();
        auto bv = b.values();
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t p = 0; p < k; ++p) {
            double acc = 0;
            for (std::size_t j = 0; j < n; ++j) acc += g[i * n + j] * bv[p * n + j];
            ag[i * k + p] += acc;
          }
      }
      if (b.requires_grad()) {
        auto bg = b.grad();
        auto av = a.values();
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t p = 0; p < k; ++p) {
            const double aip = av[i * k + p];
            for (std::size_t j = 0; j < n; ++j) bg[p * n + j] += aip * g[i * n + j];
          }
      }
    });
  }
  return out;
}

Tensor matvec(Tape& tape, const Tensor& m, const Tensor& x) {
  require_rank(m, 2, "matvec", "matrix");
  require_rank(x, 1, "matvec", "vector");
  const std::size_t rows = m.dim(0), cols = m.dim(1);
  if (x.dim(0) != cols) {
    throw DimensionError("matvec: shapes " + shape_string(m.shape()) +
                         " and " + shape_string(x.shape()) +
                         " are not aligned");
  }
  Tensor out(Shape{rows});
  auto mv = m.values();
  auto xv = x.values();
  auto ov = out.values();
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = 0;
    for (std::size_t c = 0; c < cols; ++c) acc += mv[r * cols + c] * xv[c];
    ov[r] = acc;
  }
  if (tape.wants({&m, &x})) {
    out.set_requires_grad(true);
    tape.record({m.id(), x.id()}, out, [m, x, out, rows, cols]() mutable {
      auto g = out.grad();
      if (m.requires_grad()) {
        auto mg = m.grad();
        auto xv = x.values();
        for (std::size_t r = 0; r < rows; ++r)
          for (std::size_t c = 0; c < cols; ++c) mg[r * cols + c] += g[r] * xv[c];
      }
      if (x.requires_grad()) {
        auto xg = x.grad();
        auto mv = m.values();
        for (std::size_t r = 0; r < rows; ++r)
          for (std::size_t c = 0; c < cols; ++c) xg[c] += g[r] * mv[r * cols + c];
      }
    });
  }
  return out;
}

Tensor linear(Tape& tape, const Tensor& w, const Tensor& x, const Tensor& b) {
  require_rank(w, 2, "linear", "weights");
  require_rank(x, 1, "linear", "input");
  require_rank(b, 1, "linear", "bias");
  const std::size_t rows = w.dim(0), cols = w.dim(1);
  if (x.dim(0) != cols || b.dim(0) != rows) {
    throw DimensionError("linear: weights " + shape_string(w.shape()) +
                         ", input " + shape_string(x.shape()) + ", bias " +
                         shape_string(b.shape()) + " are inconsistent");
  }
  Tensor out(Shape{rows});
  auto wv = w.values();
  auto xv = x.values();
  auto bv = b.values();
  auto ov = out.values();
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = bv[r];
    for (std::size_t c = 0; c < cols; ++c) acc += wv[r * cols + c] * xv[c];
    ov[r] = acc;
  }
  if (tape.wants({&w, &x, &b})) {
    out.set_requires_grad(true);
    tape.record({w.id(), x.id(), b.id()}, out,
                [w, x, b, out, rows, cols]() mutable {
                  auto g = out.grad();
                  if (w.requires_grad()) {
                    auto wg = w.grad();
                    auto xv = x.values();
                    for (std::size_t r = 0; r < rows; ++r)
                      for (std::size_t c = 0; c < cols; ++c)
                        wg[r * cols + c] += g[r] * xv[c];
                  }
                  if (x.requires_grad()) {
                    auto xg = x.grad();
                    auto wv = w.values();
                    for (std::size_t r = 0; r < rows; ++r)
                      for (std::size_t c = 0; c < cols; ++c)
                        xg[c] += g[r] * wv[r * cols + c];
                  }
                  if (b.requires_grad()) {
                    auto bg = b.grad();
                    for (std::size_t r = 0; r < rows; ++r) bg[r] += g[r];
                  }
                });
  }
  return out;
}

Tensor gate_preactivation(Tape& tape, const Tensor& w, const Tensor& x,
                          const Tensor& u, const Tensor& h, const Tensor& b) {
  require_rank(w, 2, "gate", "input weights");
  require_rank(u, 2, "gate", "recurrent weights");
  require_rank(x, 1, "gate", "input");
  require_rank(h, 1, "gate", "state");
  require_rank(b, 1, "gate", "bias");
  const std::size_t rows = w.dim(0), in = w.dim(1), hid = u.dim(1);
  if (x.dim(0) != in || u.dim(0) != rows || h.dim(0) != hid ||
      b.dim(0) != rows) {
    throw DimensionError(
        "gate: W " + shape_string(w.shape()) + ", x " +
        shape_string(x.shape()) + ", U " + shape_string(u.shape()) + ", h " +
        shape_string(h.shape()) + ", b " + shape_string(b.shape()) +
        " are inconsistent");
  }
  Tensor out(Shape{rows});
  {
    auto wv = w.values();
    auto xv = x.values();
    auto uv = u.values();
    auto hv = h.values();
    auto bv = b.values();
    auto ov = out.values();
    for (std::size_t r = 0; r < rows; ++r) {
      double acc = bv[r];
      for (std::size_t c = 0; c < in; ++c) acc += wv[r * in + c] * xv[c];
      for (std::size_t c = 0; c < hid; ++c) acc += uv[r * hid + c] * hv[c];
      ov[r] = acc;
    }
  }
  if (tape.wants({&w, &x, &u, &h, &b})) {
    out.set_requires_grad(true);
    tape.record(
        {w.id(), x.id(), u.id(), h.id(), b.id()}, out,
        [w, x, u, h, b, out, rows, in, hid]() mutable {
          auto g = out.grad();
          auto accumulate = [&](const Tensor& mat, const Tensor& vec,
                                std::size_t cols) {
            if (mat.requires_grad()) {
              auto mg = mat.grad();
              auto vv = vec.values();
              for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c)
                  mg[r * cols + c] += g[r] * vv[c];
            }
            if (vec.requires_grad()) {
              auto vg = vec.grad();
              auto mv = mat.values();
              for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c)
                  vg[c] += g[r] * mv[r * cols + c];
            }
          };
          accumulate(w, x, in);
          accumulate(u, h, hid);
          if (b.requires_grad()) {
            auto bg = b.grad();
            for (std::size_t r = 0; r < rows; ++r) bg[r] += g[r];
          }
        });
  }
  return out;
}

Tensor linear_rows(Tape& tape, const Tensor& w, const Tensor& m,
                   const Tensor& b) {
  require_rank(w, 2, "linear_rows", "weights");
  require_rank(m, 2, "linear_rows", "input");
  require_rank(b, 1, "linear_rows", "bias");
  const std::size_t out_dim = w.dim(0), in = w.dim(1), steps = m.dim(0);
  if (m.dim(1) != in || b.dim(0) != out_dim) {
    throw DimensionError("linear_rows: weights " + shape_string(w.shape()) +
                         ", input " + shape_string(m.shape()) + ", bias " +
                         shape_string(b.shape()) + " are inconsistent");
  }
  Tensor out(Shape{steps, out_dim});
  {
    auto wv = w.values();
    auto mv = m.values();
    auto bv = b.values();
    auto ov = out.values();
    for (std::size_t t = 0; t < steps; ++t)
      for (std::size_t r = 0; r < out_dim; ++r) {
        double acc = bv[r];
        for (std::size_t c = 0; c < in; ++c) acc += wv[r * in + c] * mv[t * in + c];
        ov[t * out_dim + r] = acc;
      }
  }
  if (tape.wants({&w, &m, &b})) {
    out.set_requires_grad(true);
    tape.record({w.id(), m.id(), b.id()}, out,
                [w, m, b, out, out_dim, in, steps]() mutable {
                  auto g = out.grad();
                  auto wv = w.values();
                  auto mv = m.values();
                  for (std::size_t t = 0; t < steps; ++t)
                    for (std::size_t r = 0; r < out_dim; ++r) {
                      const double gr = g[t * out_dim + r];
                      if (w.requires_grad()) {
                        auto wg = w.grad();
                        for (std::size_t c = 0; c < in; ++c)
                          wg[r * in + c] += gr * mv[t * in + c];
                      }
                      if (m.requires_grad()) {
                        auto mg = m.grad();
                        for (std::size_t c = 0; c < in; ++c)
                          mg[t * in + c] += gr * wv[r * in + c];
                      }
                      if (b.requires_grad()) b.grad()[r] += gr;
                    }
                });
  }
  return out;
}

Tensor add_row_bias(Tape& tape, const Tensor& m, const Tensor& b) {
  require_rank(m, 2, "add_row_bias", "matrix");
  require_rank(b, 1, "add_row_bias", "bias");
  const std::size_t rows = m.dim(0), cols = m.dim(1);
  if (b.dim(0) != cols) {
    throw DimensionError("add_row_bias: matrix " + shape_string(m.shape()) +
                         " and bias " + shape_string(b.shape()) +
                         " differ in width");
  }
  Tensor out(m.shape());
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      out.values()[r * cols + c] = m.values()[r * cols + c] + b.values()[c];
  if (tape.wants({&m, &b})) {
    out.set_requires_grad(true);
    tape.record({m.id(), b.id()}, out, [m, b, out, rows, cols]() mutable {
      auto g = out.grad();
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
          if (m.requires_grad()) m.grad()[r * cols + c] += g[r * cols + c];
          if (b.requires_grad()) b.grad()[c] += g[r * cols + c];
        }
    });
  }
  return out;
}

Tensor add(Tape& tape, const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  Tensor out(a.shape());
  const std::size_t n = a.numel();
  for (std::size_t i = 0; i < n; ++i)
    out.values()[i] = a.values()[i] + b.values()[i];
  if (tape.wants({&a, &b})) {
    out.set_requires_grad(true);
    tape.record({a.id(), b.id()}, out, [a, b, out, n]() mutable {
      auto g = out.grad();
      if (a.requires_grad())
        for (std::size_t i = 0; i < n; ++i) a.grad()[i] += g[i];
      if (b.requires_grad())
        for (std::size_t i = 0; i < n; ++i) b.grad()[i] += g[i];
    });
  }
  return out;
}

Tensor sub(Tape& tape, const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  Tensor out(a.shape());
  const std::size_t n = a.numel();
  for (std::size_t i = 0; i < n; ++i)
    out.values()[i] = a.values()[i] - b.values()[i];
  if (tape.wants({&a, &b})) {
    out.set_requires_grad(true);
    tape.record({a.id(), b.id()}, out, [a, b, out, n]() mutable {
      auto g = out.grad();
      if (a.requires_grad())
        for (std::size_t i = 0; i < n; ++i) a.grad()[i] += g[i];
      if (b.requires_grad())
        for (std::size_t i = 0; i < n; ++i) b.grad()[i] -= g[i];
    });
  }
  return out;
}

Tensor mul(Tape& tape, const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  Tensor out(a.shape());
  const std::size_t n = a.numel();
  for (std::size_t i = 0; i < n; ++i)
    out.values()[i] = a.values()[i] * b.values()[i];
  if (tape.wants({&a, &b})) {
    out.set_requires_grad(true);
    tape.record({a.id(), b.id()}, out, [a, b, out, n]() mutable {
      auto g = out.grad();
      if (a.requires_grad())
        for (std::size_t i = 0; i < n; ++i) a.grad()[i] += g[i] * b.values()[i];
      if (b.requires_grad())
        for (std::size_t i = 0; i < n; ++i) b.grad()[i] += g[i] * a.values()[i];
    });
  }
  return out;
}

Tensor scale(Tape& tape, const Tensor& a, double factor) {
  Tensor out(a.shape());
  const std::size_t n = a.numel();
  for (std::size_t i = 0; i < n; ++i) out.values()[i] = a.values()[i] * factor;
  if (tape.wants({&a})) {
    out.set_requires_grad(true);
    tape.record({a.id()}, out, [a, out, n, factor]() mutable {
      auto g = out.grad();
      for (std::size_t i = 0; i < n; ++i) a.grad()[i] += g[i] * factor;
    });
  }
  return out;
}

Tensor mask_multiply(Tape& tape, const Tensor& x, std::vector<double> mask) {
  if (mask.size() != x.numel()) {
    throw DimensionError("mask_multiply: mask of " +
                         std::to_string(mask.size()) +
                         " values for tensor of shape " +
                         shape_string(x.shape()));
  }
  Tensor out(x.shape());
  const std::size_t n = x.numel();
  for (std::size_t i = 0; i < n; ++i) out.values()[i] = x.values()[i] * mask[i];
  if (tape.wants({&x})) {
    out.set_requires_grad(true);
    tape.record({x.id()}, out, [x, out, n, mask = std::move(mask)]() mutable {
      auto g = out.grad();
      for (std::size_t i = 0; i < n; ++i) x.grad()[i] += g[i] * mask[i];
    });
  }
  return out;
}

Tensor activation(Tape& tape, const Tensor& x, Activation kind) {
  Tensor out(x.shape());
  const std::size_t n = x.numel();
  auto xv = x.values();
  auto ov = out.values();
  for (std::size_t i = 0; i < n; ++i) {
    switch (kind) {
      case Activation::kIdentity:
        ov[i] = xv[i];
        break;
      case Activation::kTanh:
        ov[i] = std::tanh(xv[i]);
        break;
      case Activation::kSigmoid:
        ov[i] = sigmoid(xv[i]);
        break;
      case Activation::kRelu:
        ov[i] = xv[i] > 0 ? xv[i] : 0.0;
        break;
    }
  }
  if (tape.wants({&x})) {
    out.set_requires_grad(true);
    tape.record({x.id()}, out, [x, out, n, kind]() mutable {
      auto g = out.grad();
      auto y = out.values();
      auto xg = x.grad();
      auto xv = x.values();
      for (std::size_t i = 0; i < n; ++i) {
        double d = 1.0;
        switch (kind) {
          case Activation::kIdentity:
            break;
          case Activation::kTanh:
            d = 1.0 - y[i] * y[i];
            break;
          case Activation::kSigmoid:
            d = y[i] * (1.0 - y[i]);
            break;
          case Activation::kRelu:
            d = xv[i] > 0 ? 1.0 : 0.0;
            break;
        }
        xg[i] += g[i] * d;
      }
    });
  }
  return out;
}

Tensor softmax(Tape& tape, const Tensor& x) {
  require_rank(x, 1, "softmax", "input");
  const std::size_t n = x.numel();
  if (n == 0) throw DomainError("softmax of an empty vector");
  auto xv = x.values();
  const double peak = *std::max_element(xv.begin(), xv.end());
  Tensor out(x.shape());
  auto ov = out.values();
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ov[i] = std::exp(xv[i] - peak);
    total += ov[i];
  }
  for (std::size_t i = 0; i < n; ++i) ov[i] /= total;
  if (tape.wants({&x})) {
    out.set_requires_grad(true);
    tape.record({x.id()}, out, [x, out, n]() mutable {
      auto g = out.grad();
      auto y = out.values();
      double inner = 0;
      for (std::size_t i = 0; i < n; ++i) inner += g[i] * y[i];
      auto xg = x.grad();
      for (std::size_t i = 0; i < n; ++i) xg[i] += y[i] * (g[i] - inner);
    });
  }
  return out;
}

Tensor concat(Tape& tape, std::span<const Tensor> parts, std::size_t axis) {
  if (parts.empty()) throw DomainError("concat of zero tensors");
  const Shape& first = parts[0].shape();
  if (axis >= first.size()) {
    throw DimensionError("concat: axis " + std::to_string(axis) +
                         " out of range for shape " + shape_string(first));
  }
  Shape shape = first;
  shape[axis] = 0;
  for (const Tensor& p : parts) {
    const Shape& s = p.shape();
    bool ok = s.size() == first.size();
    for (std::size_t d = 0; ok && d < s.size(); ++d)
      if (d != axis && s[d] != first[d]) ok = false;
    if (!ok) {
      throw DimensionError("concat: ragged shapes " + shape_string(first) +
                           " and " + shape_string(s) + " along axis " +
                           std::to_string(axis));
    }
    shape[axis] += s[axis];
  }
  // View every tensor as [outer, axis_len * inner] blocks.
  std::size_t outer = 1, inner = 1;
  for (std::size_t d = 0; d < axis; ++d) outer *= first[d];
  for (std::size_t d = axis + 1; d < first.size(); ++d) inner *= first[d];
  const std::size_t out_block = shape[axis] * inner;
  Tensor out(shape);
  std::vector<std::size_t> offsets;
  std::size_t offset = 0;
  for (const Tensor& p : parts) {
    offsets.push_back(offset);
    const std::size_t block = p.shape()[axis] * inner;
    for (std::size_t o = 0; o < outer; ++o)
      std::copy_n(p.values().begin() + o * block, block,
                  out.values().begin() + o * out_block + offset);
    offset += block;
  }
  if (tape.wants(parts)) {
    out.set_requires_grad(true);
    std::vector<Tensor> held(parts.begin(), parts.end());
    tape.record(ids_of(parts), out,
                [held, out, offsets, outer, inner, out_block, axis]() mutable {
                  auto g = out.grad();
                  for (std::size_t k = 0; k < held.size(); ++k) {
                    Tensor& p = held[k];
                    if (!p.requires_grad()) continue;
                    const std::size_t block = p.shape()[axis] * inner;
                    auto pg = p.grad();
                    for (std::size_t o = 0; o < outer; ++o)
                      for (std::size_t i = 0; i < block; ++i)
                        pg[o * block + i] += g[o * out_block + offsets[k] + i];
                  }
                });
  }
  return out;
}

Tensor stack_rows(Tape& tape, std::span<const Tensor> rows) {
  if (rows.empty()) throw DomainError("stack_rows of zero tensors");
  const std::size_t width = rows[0].numel();
  for (const Tensor& r : rows) {
    require_rank(r, 1, "stack_rows", "row");
    if (r.numel() != width) {
      throw DimensionError("stack_rows: rows of width " +
                           std::to_string(width) + " and " +
                           std::to_string(r.numel()));
    }
  }
  Tensor out(Shape{rows.size(), width});
  for (std::size_t t = 0; t < rows.size(); ++t)
    std::copy(rows[t].values().begin(), rows[t].values().end(),
              out.values().begin() + t * width);
  if (tape.wants(rows)) {
    out.set_requires_grad(true);
    std::vector<Tensor> held(rows.begin(), rows.end());
    tape.record(ids_of(rows), out, [held, out, width]() mutable {
      auto g = out.grad();
      for (std::size_t t = 0; t < held.size(); ++t) {
        if (!held[t].requires_grad()) continue;
        auto rg = held[t].grad();
        for (std::size_t i = 0; i < width; ++i) rg[i] += g[t * width + i];
      }
    });
  }
  return out;
}

Tensor row(Tape& tape, const Tensor& m, std::size_t i) {
  require_rank(m, 2, "row", "matrix");
  if (i >= m.dim(0)) {
    throw DimensionError("row " + std::to_string(i) +
                         " out of range for shape " + shape_string(m.shape()));
  }
  const std::size_t width = m.dim(1);
  Tensor out(Shape{width}, std::vector<double>(m.values().begin() + i * width,
                                               m.values().begin() + (i + 1) * width));
  if (tape.wants({&m})) {
    out.set_requires_grad(true);
    tape.record({m.id()}, out, [m, out, i, width]() mutable {
      auto g = out.grad();
      auto mg = m.grad();
      for (std::size_t c = 0; c < width; ++c) mg[i * width + c] += g[c];
    });
  }
  return out;
}

Tensor repeat_rows(Tape& tape, const Tensor& v, std::size_t count) {
  require_rank(v, 1, "repeat_rows", "vector");
  if (count == 0) throw DomainError("repeat count must be at least 1");
  const std::size_t width = v.numel();
  Tensor out(Shape{count, width});
  for (std::size_t t = 0; t < count; ++t)
    std::copy(v.values().begin(), v.values().end(),
              out.values().begin() + t * width);
  if (tape.wants({&v})) {
    out.set_requires_grad(true);
    tape.record({v.id()}, out, [v, out, count, width]() mutable {
      auto g = out.grad();
      auto vg = v.grad();
      for (std::size_t t = 0; t < count; ++t)
        for (std::size_t c = 0; c < width; ++c) vg[c] += g[t * width + c];
    });
  }
  return out;
}

Tensor gather_rows(Tape& tape, const Tensor& table,
                   std::span<const std::size_t> ids,
                   std::optional<std::size_t> frozen_row) {
  require_rank(table, 2, "gather_rows", "table");
  if (ids.empty()) throw DomainError("gather_rows with no ids");
  const std::size_t rows = table.dim(0), width = table.dim(1);
  Tensor out(Shape{ids.size(), width});
  for (std::size_t t = 0; t < ids.size(); ++t) {
    if (ids[t] >= rows) {
      throw DomainError("token id " + std::to_string(ids[t]) +
                        " out of range for table with " +
                        std::to_string(rows) + " rows");
    }
    std::copy_n(table.values().begin() + ids[t] * width, width,
                out.values().begin() + t * width);
  }
  if (tape.wants({&table})) {
    out.set_requires_grad(true);
    std::vector<std::size_t> held(ids.begin(), ids.end());
    tape.record({table.id()}, out,
                [table, out, held, width, frozen_row]() mutable {
                  auto g = out.grad();
                  auto tg = table.grad();
                  for (std::size_t t = 0; t < held.size(); ++t) {
                    if (frozen_row && held[t] == *frozen_row) continue;
                    for (std::size_t c = 0; c < width; ++c)
                      tg[held[t] * width + c] += g[t * width + c];
                  }
                });
  }
  return out;
}

Tensor mean_rows(Tape& tape, const Tensor& m) {
  require_rank(m, 2, "mean_rows", "matrix");
  const std::size_t rows = m.dim(0), width = m.dim(1);
  if (rows == 0) throw DomainError("mean_rows of an empty matrix");
  Tensor out(Shape{width});
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < width; ++c)
      out.values()[c] += m.values()[r * width + c];
  for (double& v : out.values()) v /= static_cast<double>(rows);
  if (tape.wants({&m})) {
    out.set_requires_grad(true);
    tape.record({m.id()}, out, [m, out, rows, width]() mutable {
      auto g = out.grad();
      auto mg = m.grad();
      const double inv = 1.0 / static_cast<double>(rows);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < width; ++c) mg[r * width + c] += g[c] * inv;
    });
  }
  return out;
}

Tensor sum(Tape& tape, const Tensor& x) {
  double total = 0;
  for (double v : x.values()) total += v;
  Tensor out = Tensor::scalar(total);
  if (tape.wants({&x})) {
    out.set_requires_grad(true);
    tape.record({x.id()}, out, [x, out]() mutable {
      const double g = out.grad()[0];
      for (double& xg : x.grad()) xg += g;
    });
  }
  return out;
}

Tensor dot(Tape& tape, const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "dot");
  double total = 0;
  const std::size_t n = a.numel();
  for (std::size_t i = 0; i < n; ++i) total += a.values()[i] * b.values()[i];
  Tensor out = Tensor::scalar(total);
  if (tape.wants({&a, &b})) {
    out.set_requires_grad(true);
    tape.record({a.id(), b.id()}, out, [a, b, out, n]() mutable {
      const double g = out.grad()[0];
      if (a.requires_grad())
        for (std::size_t i = 0; i < n; ++i) a.grad()[i] += g * b.values()[i];
      if (b.requires_grad())
        for (std::size_t i = 0; i < n; ++i) b.grad()[i] += g * a.values()[i];
    });
  }
  return out;
}

Tensor weighted_sum(Tape& tape, const Tensor& weights,
                    std::span<const Tensor> vectors) {
  require_rank(weights, 1, "weighted_sum", "weights");
  if (vectors.empty() || weights.numel() != vectors.size()) {
    throw DimensionError("weighted_sum: " + std::to_string(weights.numel()) +
                         " weights for " + std::to_string(vectors.size()) +
                         " vectors");
  }
  const Shape& shape = vectors[0].shape();
  for (const Tensor& v : vectors) require_same_shape(vectors[0], v, "weighted_sum");
  Tensor out(shape);
  const std::size_t n = out.numel();
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    const double w = weights.values()[k];
    for (std::size_t i = 0; i < n; ++i) out.values()[i] += w * vectors[k].values()[i];
  }
  std::vector<Tensor> all{weights};
  all.insert(all.end(), vectors.begin(), vectors.end());
  if (tape.wants(std::span<const Tensor>(all))) {
    out.set_requires_grad(true);
    tape.record(ids_of(all), out, [all, out, n]() mutable {
      auto g = out.grad();
      Tensor& w = all[0];
      for (std::size_t k = 1; k < all.size(); ++k) {
        Tensor& v = all[k];
        if (w.requires_grad()) {
          double acc = 0;
          for (std::size_t i = 0; i < n; ++i) acc += g[i] * v.values()[i];
          w.grad()[k - 1] += acc;
        }
        if (v.requires_grad()) {
          const double wk = w.values()[k - 1];
          for (std::size_t i = 0; i < n; ++i) v.grad()[i] += g[i] * wk;
        }
      }
    });
  }
  return out;
}

}  // namespace tla
