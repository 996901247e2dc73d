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

#include "tla/tensor.h"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <unordered_set>

#include "tla/errors.h"

namespace tla {
namespace {

std::uint64_t next_tensor_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

}  // namespace

std::string shape_string(const Shape& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << ',';
    out << shape[i];
  }
  out << ']';
  return out.str();
}

std::size_t shape_numel(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

Tensor::Tensor(Shape shape, bool requires_grad)
    : Tensor(shape, std::vector<double>(shape_numel(shape), 0.0),
             requires_grad) {}

Tensor::Tensor(Shape shape, std::vector<double> values, bool requires_grad)
    : impl_(std::make_shared<Impl>()) {
  if (shape_numel(shape) != values.size()) {
    throw DimensionError("tensor shape " + shape_string(shape) + " holds " +
                         std::to_string(shape_numel(shape)) +
                         " values, got " + std::to_string(values.size()));
  }
  impl_->id = next_tensor_id();
  impl_->grad.assign(values.size(), 0.0);
  impl_->shape = std::move(shape);
  impl_->values = std::move(values);
  impl_->requires_grad = requires_grad;
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return Tensor(Shape{}, std::vector<double>{value}, requires_grad);
}

Tensor Tensor::vector(std::vector<double> values, bool requires_grad) {
  Shape shape{values.size()};
  return Tensor(std::move(shape), std::move(values), requires_grad);
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols,
                      std::vector<double> values, bool requires_grad) {
  return Tensor(Shape{rows, cols}, std::move(values), requires_grad);
}

std::uint64_t Tensor::id() const { return impl_ ? impl_->id : 0; }

const Shape& Tensor::shape() const {
  static const Shape kEmpty;
  return impl_ ? impl_->shape : kEmpty;
}

std::size_t Tensor::numel() const { return impl_ ? impl_->values.size() : 0; }

std::size_t Tensor::dim(std::size_t axis) const {
  if (axis >= rank()) {
    throw DimensionError("axis " + std::to_string(axis) +
                         " out of range for shape " + shape_string(shape()));
  }
  return shape()[axis];
}

std::span<double> Tensor::values() { return impl_->values; }
std::span<const double> Tensor::values() const { return impl_->values; }
std::span<double> Tensor::grad() const { return impl_->grad; }

bool Tensor::requires_grad() const { return impl_ && impl_->requires_grad; }

void Tensor::set_requires_grad(bool requires_grad) {
  impl_->requires_grad = requires_grad;
}

double Tensor::item() const {
  if (numel() != 1) {
    throw ContractError("item() on tensor of shape " + shape_string(shape()));
  }
  return impl_->values[0];
}

double Tensor::at(std::size_t r, std::size_t c) const {
  return impl_->values[r * impl_->shape[1] + c];
}

void Tensor::zero_grad() const {
  std::fill(impl_->grad.begin(), impl_->grad.end(), 0.0);
}

Tensor Tensor::clone() const {
  return Tensor(impl_->shape, impl_->values, impl_->requires_grad);
}

Tensor Tensor::detach() const { return Tensor(impl_->shape, impl_->values); }

bool Tape::wants(std::initializer_list<const Tensor*> inputs) const {
  if (!recording()) return false;
  for (const Tensor* t : inputs) {
    if (t->requires_grad()) return true;
  }
  return false;
}

bool Tape::wants(std::span<const Tensor> inputs) const {
  if (!recording()) return false;
  return std::any_of(inputs.begin(), inputs.end(),
                     [](const Tensor& t) { return t.requires_grad(); });
}

void Tape::record(std::vector<std::uint64_t> input_ids, Tensor output,
                  std::function<void()> backward) {
  for (std::uint64_t id : input_ids) {
    if (id >= output.id()) {
      throw ContractError("tape node input was created after its output");
    }
  }
  nodes_.push_back(Node{std::move(input_ids), std::move(output),
                        std::move(backward)});
}

void Tape::backward(const Tensor& loss) {
  if (!loss.defined() || loss.numel() != 1) {
    throw ContractError("backward() needs a scalar loss, got shape " +
                        shape_string(loss.shape()));
  }
  std::size_t end = nodes_.size();
  while (end > 0 && !nodes_[end - 1].output.same_storage(loss)) --end;
  if (end == 0) {
    throw ContractError("backward() loss was not produced on this tape");
  }
  for (std::size_t i = 0; i < end; ++i) nodes_[i].output.zero_grad();
  Tensor seed = nodes_[end - 1].output;
  seed.grad()[0] = 1.0;
  for (std::size_t i = end; i-- > 0;) nodes_[i].backward();
}

void zero_grads(ParameterList& params) {
  for (NamedTensor& p : params) p.tensor.zero_grad();
}

void copy_values(const ParameterList& from, const ParameterList& to) {
  if (from.size() != to.size()) {
    throw DimensionError("copy_values: " + std::to_string(from.size()) +
                         " source tensors for " + std::to_string(to.size()) +
                         " destinations");
  }
  for (std::size_t i = 0; i < from.size(); ++i) {
    const Tensor& src = from[i].tensor;
    Tensor dst = to[i].tensor;  // shares storage
    if (src.shape() != dst.shape()) {
      throw DimensionError("copy_values: '" + from[i].name + "' has shape " +
                           shape_string(src.shape()) + ", '" + to[i].name +
                           "' has " + shape_string(dst.shape()));
    }
    auto s = src.values();
    auto d = dst.values();
    std::copy(s.begin(), s.end(), d.begin());
  }
}

}  // namespace tla
