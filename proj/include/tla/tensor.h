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

#ifndef TLA_TENSOR_H_
#define TLA_TENSOR_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace tla {

using Shape = std::vector<std::size_t>;

std::string shape_string(const Shape& shape);
std::size_t shape_numel(const Shape& shape);

// Dense row-major array of doubles with an attached gradient buffer.
//
// Tensor is a shared handle: copies alias the same storage, so a parameter
// captured by a tape node and held by a model is the same object. Use
// clone() for a deep copy.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, bool requires_grad = false);
  Tensor(Shape shape, std::vector<double> values, bool requires_grad = false);

  static Tensor scalar(double value, bool requires_grad = false);
  static Tensor vector(std::vector<double> values, bool requires_grad = false);
  static Tensor matrix(std::size_t rows, std::size_t cols,
                       std::vector<double> values, bool requires_grad = false);

  bool defined() const { return impl_ != nullptr; }
  std::uint64_t id() const;

  const Shape& shape() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t numel() const;
  std::size_t dim(std::size_t axis) const;

  std::span<double> values();
  std::span<const double> values() const;
  // Gradient storage is shared by every handle, so it stays writable
  // through const handles (tape nodes hold const copies of their inputs).
  std::span<double> grad() const;

  bool requires_grad() const;
  void set_requires_grad(bool requires_grad);

  // Value of a single-element tensor.
  double item() const;
  double at(std::size_t i) const { return values()[i]; }
  double at(std::size_t r, std::size_t c) const;

  void zero_grad() const;

  // Deep copy with fresh identity. The copy keeps requires_grad.
  Tensor clone() const;
  // Deep copy of the values only; never requires grad.
  Tensor detach() const;

  bool same_storage(const Tensor& other) const { return impl_ == other.impl_; }

 private:
  struct Impl {
    std::uint64_t id = 0;
    Shape shape;
    std::vector<double> values;
    std::vector<double> grad;
    bool requires_grad = false;
  };
  std::shared_ptr<Impl> impl_;
};

// Reverse-mode tape. Operations append one node each; backward() replays
// the recorded rules in reverse. A tape is confined to one thread.
class Tape {
 public:
  enum class Mode { kRecord, kInference };

  struct Node {
    std::vector<std::uint64_t> input_ids;
    Tensor output;
    std::function<void()> backward;
  };

  explicit Tape(Mode mode = Mode::kRecord) : mode_(mode) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return mode_ == Mode::kRecord; }

  // True when an op over `inputs` must be recorded.
  bool wants(std::initializer_list<const Tensor*> inputs) const;
  bool wants(std::span<const Tensor> inputs) const;

  void record(std::vector<std::uint64_t> input_ids, Tensor output,
              std::function<void()> backward);

  // Accumulates d(loss)/d(leaf) into every requires_grad leaf reachable
  // from `loss`. Intermediate gradients are reset first, so repeated calls
  // add to leaf gradients exactly once per call.
  void backward(const Tensor& loss);

  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

 private:
  Mode mode_;
  std::vector<Node> nodes_;
};

inline void backward(const Tensor& loss, Tape& tape) { tape.backward(loss); }

// A trainable tensor with a stable, hierarchical name ("enc0.s1.l0.W_i").
struct NamedTensor {
  std::string name;
  Tensor tensor;
};
using ParameterList = std::vector<NamedTensor>;

void zero_grads(ParameterList& params);

// Copies values element-wise between lists of matching names and shapes;
// throws DimensionError on any mismatch.
void copy_values(const ParameterList& from, const ParameterList& to);

}  // namespace tla

#endif  // TLA_TENSOR_H_
