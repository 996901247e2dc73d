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

#include "tla/gradcheck_suite.h"

#include <array>
#include <cmath>
#include <functional>

#include "tla/errors.h"
#include "tla/layers.h"
#include "tla/losses.h"
#include "tla/models.h"
#include "tla/ops.h"
#include "tla/rng.h"

namespace tla {

std::string_view grad_scope_name(GradScope scope) {
  switch (scope) {
    case GradScope::kOps: return "ops";
    case GradScope::kLayers: return "layers";
    case GradScope::kModels: return "models";
  }
  return "?";
}

GradScope parse_grad_scope(std::string_view name) {
  for (GradScope s : {GradScope::kOps, GradScope::kLayers, GradScope::kModels})
    if (grad_scope_name(s) == name) return s;
  throw ConfigError("gradcheck scope must be ops, layers or models, got '" +
                    std::string(name) + "'");
}

namespace {

Tensor random_param(Shape shape, Rng& rng) {
  std::vector<double> v(shape_numel(shape));
  for (double& x : v) x = rng.uniform(-2.0, 2.0);
  return Tensor(std::move(shape), std::move(v), true);
}

// sum(w .* x) against fixed weights, so every output element carries a
// distinct upstream gradient.
Tensor probe(Tape& tape, const Tensor& x, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> w(x.numel());
  for (double& v : w) v = rng.uniform(-1.0, 1.0);
  return sum(tape, mul(tape, x, Tensor(x.shape(), std::move(w))));
}

// tanh with a deliberately wrong derivative.
Tensor faulty_tanh(Tape& tape, const Tensor& x) {
  Tensor out(x.shape());
  for (std::size_t i = 0; i < x.numel(); ++i) out.values()[i] = std::tanh(x.at(i));
  if (tape.wants({&x})) {
    out.set_requires_grad(true);
    tape.record({x.id()}, out, [x, out]() {
      for (std::size_t i = 0; i < x.numel(); ++i) {
        const double y = out.at(i);
        x.grad()[i] += 1.1 * (1.0 - y * y) * out.grad()[i];
      }
    });
  }
  return out;
}

class Suite {
 public:
  Suite(GradScope scope, std::uint64_t seed) : scope_(grad_scope_name(scope)), seed_(seed) {}

  void check(const std::string& name, double tolerance, const LossBuilder& loss,
             ParameterList params) {
    GradCheckEntry e;
    e.scope = scope_;
    e.name = name;
    e.tolerance = tolerance;
    e.result = gradcheck(loss, std::move(params));
    entries_.push_back(std::move(e));
  }
  std::uint64_t seed() const { return seed_; }
  std::vector<GradCheckEntry> take() { return std::move(entries_); }

 private:
  std::string scope_;
  std::uint64_t seed_;
  std::vector<GradCheckEntry> entries_;
};

void ops_suite(Suite& s, bool inject_fault) {
  Rng rng(s.seed());
  const std::uint64_t ps = s.seed();
  Tensor a = random_param({3, 4}, rng), b = random_param({4, 2}, rng);
  Tensor v = random_param({4}, rng), v2 = random_param({4}, rng);
  Tensor m = random_param({3, 4}, rng), u = random_param({3, 3}, rng);
  Tensor h = random_param({3}, rng), b3 = random_param({3}, rng);
  Tensor b4 = random_param({4}, rng), w3 = random_param({3}, rng);
  Tensor w24 = random_param({2, 4}, rng), b2 = random_param({2}, rng);
  constexpr double tol = kOpTolerance;

  s.check("matmul", tol, [&](Tape& t) { return probe(t, matmul(t, a, b), ps); },
          {{"a", a}, {"b", b}});
  s.check("matvec", tol, [&](Tape& t) { return probe(t, matvec(t, m, v), ps); },
          {{"m", m}, {"v", v}});
  s.check("linear", tol, [&](Tape& t) { return probe(t, linear(t, m, v, b3), ps); },
          {{"m", m}, {"v", v}, {"b", b3}});
  s.check("gate_preactivation", tol,
          [&](Tape& t) { return probe(t, gate_preactivation(t, m, v, u, h, b3), ps); },
          {{"W", m}, {"x", v}, {"U", u}, {"h", h}, {"b", b3}});
  s.check("linear_rows", tol,
          [&](Tape& t) { return probe(t, linear_rows(t, w24, m, b2), ps); },
          {{"w", w24}, {"x", m}, {"b", b2}});
  s.check("add_row_bias", tol, [&](Tape& t) { return probe(t, add_row_bias(t, m, b4), ps); },
          {{"m", m}, {"b", b4}});
  s.check("add", tol, [&](Tape& t) { return probe(t, add(t, v, v2), ps); },
          {{"v", v}, {"v2", v2}});
  s.check("sub", tol, [&](Tape& t) { return probe(t, sub(t, v, v2), ps); },
          {{"v", v}, {"v2", v2}});
  s.check("mul", tol, [&](Tape& t) { return probe(t, mul(t, v, v2), ps); },
          {{"v", v}, {"v2", v2}});
  s.check("scale", tol, [&](Tape& t) { return probe(t, scale(t, v, -1.75), ps); },
          {{"v", v}});
  s.check("mask_multiply", tol,
          [&](Tape& t) { return probe(t, mask_multiply(t, v, {0, 1.25, 1.25, 0}), ps); },
          {{"v", v}});
  for (auto [name, kind] : {std::pair{"identity", Activation::kIdentity},
                            std::pair{"tanh", Activation::kTanh},
                            std::pair{"sigmoid", Activation::kSigmoid},
                            std::pair{"relu", Activation::kRelu}}) {
    const Activation k = kind;
    s.check(name, tol, [&, k](Tape& t) { return probe(t, activation(t, m, k), ps); },
            {{"m", m}});
  }
  s.check("softmax", tol, [&](Tape& t) { return probe(t, softmax(t, v), ps); }, {{"v", v}});
  s.check("concat", tol,
          [&](Tape& t) {
            const Tensor parts[] = {m, u};
            return probe(t, concat(t, parts, 1), ps);
          },
          {{"m", m}, {"u", u}});
  s.check("stack_rows", tol,
          [&](Tape& t) {
            const Tensor rows[] = {v, v2};
            return probe(t, stack_rows(t, rows), ps);
          },
          {{"v", v}, {"v2", v2}});
  s.check("row", tol, [&](Tape& t) { return probe(t, row(t, m, 1), ps); }, {{"m", m}});
  s.check("repeat_rows", tol, [&](Tape& t) { return probe(t, repeat_rows(t, v, 3), ps); },
          {{"v", v}});
  s.check("gather_rows", tol,
          [&](Tape& t) {
            const std::size_t ids[] = {2, 0, 2, 1};
            return probe(t, gather_rows(t, m, ids), ps);
          },
          {{"m", m}});
  s.check("mean_rows", tol, [&](Tape& t) { return probe(t, mean_rows(t, m), ps); },
          {{"m", m}});
  s.check("sum", tol, [&](Tape& t) { return sum(t, mul(t, v, v)); }, {{"v", v}});
  s.check("dot", tol, [&](Tape& t) { return dot(t, v, v2); }, {{"v", v}, {"v2", v2}});
  s.check("weighted_sum", tol,
          [&](Tape& t) {
            const Tensor vs[] = {v, v2, b4};
            return probe(t, weighted_sum(t, w3, vs), ps);
          },
          {{"w", w3}, {"v", v}, {"v2", v2}, {"b", b4}});
  if (inject_fault) {
    s.check("tanh (corrupted backward)", tol,
            [&](Tape& t) { return probe(t, faulty_tanh(t, m), ps); }, {{"m", m}});
  }
}

void layers_suite(Suite& s) {
  Rng rng(s.seed());
  const std::uint64_t ps = s.seed();

  LSTMCellParams cell = LSTMCellParams::init(3, 4, rng);
  Tensor x = random_param({3}, rng);
  LSTMState st{random_param({4}, rng), random_param({4}, rng)};
  ParameterList cell_params;
  cell.append_to(cell_params, "cell.");
  cell_params.push_back({"x", x});
  cell_params.push_back({"h0", st.h});
  cell_params.push_back({"c0", st.c});
  s.check("lstm_cell_step", kRecurrentTolerance,
          [&](Tape& t) {
            LSTMState out = lstm_cell_step(t, cell, x, st);
            return add(t, probe(t, out.h, ps), probe(t, out.c, ps + 1));
          },
          cell_params);

  StackedLSTMParams stack = StackedLSTMParams::init(3, 4, 2, 0.25, rng);
  Tensor seq = random_param({10, 3}, rng);
  ParameterList stack_params;
  stack.append_to(stack_params, "lstm.");
  stack_params.push_back({"sequence", seq});
  s.check("stacked_lstm (10 steps, dropout)", kRecurrentTolerance,
          [&](Tape& t) {
            LSTMOutput out = lstm_forward(t, stack, seq, true, ps + 7);
            return probe(t, out.hidden_sequence, ps);
          },
          stack_params);

  StackedLSTMParams fwd = StackedLSTMParams::init(3, 3, 1, 0.0, rng);
  StackedLSTMParams bwd = StackedLSTMParams::init(3, 3, 1, 0.0, rng);
  Tensor seq6 = random_param({6, 3}, rng);
  ParameterList bi_params;
  fwd.append_to(bi_params, "fwd.");
  bwd.append_to(bi_params, "bwd.");
  bi_params.push_back({"sequence", seq6});
  s.check("bilstm (6 steps)", kRecurrentTolerance,
          [&](Tape& t) {
            BiLSTMOutput out = bilstm_forward(t, fwd, bwd, seq6, false, 0);
            return add(t, probe(t, out.sequence, ps), probe(t, out.summary, ps + 1));
          },
          bi_params);

  DenseParams dense = DenseParams::init(4, 3, rng);
  dense.bias = random_param({3}, rng);
  Tensor dx = random_param({4}, rng);
  for (auto [name, act] : {std::pair{"dense linear", DenseActivation::kLinear},
                           std::pair{"dense tanh", DenseActivation::kTanh},
                           std::pair{"dense sigmoid", DenseActivation::kSigmoid},
                           std::pair{"dense relu", DenseActivation::kRelu},
                           std::pair{"dense softmax", DenseActivation::kSoftmax}}) {
    const DenseActivation a = act;
    s.check(name, kOpTolerance,
            [&, a](Tape& t) { return probe(t, dense_forward(t, dense, dx, a), ps); },
            {{"W", dense.weights}, {"b", dense.bias}, {"x", dx}});
  }

  EmbeddingTable emb = EmbeddingTable::init(6, 3, rng);
  s.check("embedding_lookup", kOpTolerance,
          [&](Tape& t) {
            // Row 0 is the frozen padding row, so it stays out of the check.
            const std::size_t ids[] = {2, 5, 2, 1};
            return probe(t, embedding_lookup(t, emb, ids), ps);
          },
          {{"table", emb.table}});
  Tensor rv = random_param({4}, rng);
  s.check("repeat_vector", kOpTolerance,
          [&](Tape& t) { return probe(t, repeat_vector(t, rv, 5), ps); }, {{"v", rv}});
  Tensor rr = random_param({4, 3}, rng);
  s.check("reverse_rows", kOpTolerance,
          [&](Tape& t) { return probe(t, reverse_rows(t, rr), ps); }, {{"x", rr}});
  s.check("dropout", kOpTolerance,
          [&](Tape& t) {
            Rng mask(ps + 3);
            return probe(t, dropout(t, rr, 0.3, mask), ps);
          },
          {{"x", rr}});

  Tensor logits = random_param({3}, rng);
  s.check("cce over softmax", kOpTolerance,
          [&](Tape& t) { return cce(t, softmax(t, logits), 1); }, {{"logits", logits}});
  Tensor blogits = random_param({5}, rng);
  s.check("bce over sigmoid", kOpTolerance,
          [&](Tape& t) {
            return bce(t, activation(t, blogits, Activation::kSigmoid),
                       std::vector<double>{1, 0, 0, 1, 1});
          },
          {{"logits", blogits}});
  Tensor ri = random_param({3, 2}, rng), ro = random_param({3, 2}, rng);
  s.check("r_loss", kOpTolerance, [&](Tape& t) { return r_loss(t, ri, ro); },
          {{"input", ri}, {"output", ro}});

  MetaLearnerParams meta = MetaLearnerParams::init(3, rng);
  std::array<Tensor, 3> mx = {random_param({3}, rng), random_param({3}, rng),
                              random_param({3}, rng)};
  ParameterList meta_params;
  meta.append_to(meta_params, "meta.");
  for (std::size_t k = 0; k < 3; ++k) meta_params.push_back({"x" + std::to_string(k), mx[k]});
  s.check("meta_learner", kRecurrentTolerance,
          [&](Tape& t) { return probe(t, meta_learner_combine(t, meta, mx).output, ps); },
          meta_params);
}

ClassifierConfig reduced_config(std::uint64_t seed) {
  ClassifierConfig c;
  c.vocab_size = 7;
  c.embed_dim = 3;
  c.hidden_size = 4;
  c.num_layers = 1;
  c.dropout = 0.2;
  c.num_classes = 3;
  c.max_len = 8;
  c.seed = seed;
  return c;
}

void models_suite(Suite& s) {
  const std::uint64_t seed = s.seed();
  auto run = [&](const std::string& name, const SequenceClassifier& m,
                 const TokenIds& tokens, std::size_t label) {
    s.check(name, kModelTolerance,
            [&m, tokens, label, seed](Tape& t) {
              ForwardResult r = m.forward(t, tokens, {true, seed});
              Tensor loss = cce(t, r.probs, label);
              if (r.reconstruction_loss.defined())
                loss = add(t, loss, scale(t, r.reconstruction_loss, 0.5));
              return loss;
            },
            m.parameters());
  };
  ClassifierConfig two_layer = reduced_config(seed);
  two_layer.hidden_size = 3;
  two_layer.num_layers = 2;
  LstmClassifier lstm(two_layer);
  run("lstm", lstm, {2, 4, 6, 3}, 1);
  BiLstmClassifier bilstm(two_layer);
  run("bilstm", bilstm, {2, 4, 6, 3}, 2);
  LstmAutoencoder ae(two_layer);
  run("lstm-ae (mse)", ae, {5, 2, 3}, 0);
  ClassifierConfig bce_cfg = two_layer;
  bce_cfg.reconstruction = ReconstructionLoss::kBce;
  LstmAutoencoder ae_bce(bce_cfg);
  run("lstm-ae (bce)", ae_bce, {5, 2, 3}, 0);
  Word2VecClassifier w2v(reduced_config(seed));
  run("word2vec-features", w2v, {2, 5, 6}, 2);
  ClassifierConfig tla_cfg = reduced_config(seed);
  tla_cfg.encoder_views = EncoderViews::kDistinctDropout;
  TlaNet tla(tla_cfg);
  run("tla-net", tla, {3, 6, 2}, 1);
  ClassifierConfig tap_cfg = reduced_config(seed);
  tap_cfg.classifier_tap = ClassifierTap::kReconstruction;
  TlaNet tla_tap(tap_cfg);
  run("tla-net (reconstruction tap)", tla_tap, {3, 6, 2}, 0);
}

}  // namespace

std::vector<GradCheckEntry> run_gradcheck_suite(GradScope scope,
                                                const GradSuiteOptions& options) {
  Suite s(scope, options.seed);
  switch (scope) {
    case GradScope::kOps: ops_suite(s, options.inject_fault); break;
    case GradScope::kLayers: layers_suite(s); break;
    case GradScope::kModels: models_suite(s); break;
  }
  return s.take();
}

}  // namespace tla
