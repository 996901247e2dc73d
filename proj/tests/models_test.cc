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

#include <cmath>
#include <numeric>
#include <vector>

#include <doctest.h>

#include "tla/checkpoint.h"
#include "tla/errors.h"
#include "tla/gradcheck.h"
#include "tla/losses.h"
#include "tla/models.h"
#include "tla/trainer.h"
#include "test_util.h"

namespace tla {
namespace {

ClassifierConfig tiny_config(std::size_t hidden = 3, std::size_t layers = 2) {
  ClassifierConfig c;
  c.vocab_size = 7;
  c.embed_dim = 3;
  c.hidden_size = hidden;
  c.num_layers = layers;
  c.dropout = 0.2;
  c.num_classes = 3;
  c.max_len = 8;
  c.seed = 21;
  return c;
}

double total(const Tensor& t) {
  return std::accumulate(t.values().begin(), t.values().end(), 0.0);
}

// CCE + 0.5 R_loss on one example with fixed dropout masks.
LossBuilder example_loss(const SequenceClassifier& m, TokenIds tokens,
                         std::size_t label) {
  return [&m, tokens, label](Tape& tape) {
    ForwardResult r = m.forward(tape, tokens, {true, 99});
    Tensor loss = cce(tape, r.probs, label);
    if (r.reconstruction_loss.defined())
      loss = add(tape, loss, scale(tape, r.reconstruction_loss, 0.5));
    return loss;
  };
}

TEST_CASE("every model emits a distribution") {
  for (ModelKind kind : {ModelKind::kLstm, ModelKind::kBiLstm,
                         ModelKind::kLstmAutoencoder,
                         ModelKind::kWord2VecFeatures, ModelKind::kTlaNet}) {
    CAPTURE(model_kind_name(kind));
    auto m = make_classifier(kind, tiny_config());
    ModelOutput out = m->predict(TokenIds{2, 3, 4, 0});
    REQUIRE(out.probabilities.size() == 3);
    CHECK(std::accumulate(out.probabilities.begin(), out.probabilities.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.reconstruction_loss.has_value() == m->has_reconstruction());
    CHECK_THROWS_AS(m->predict(TokenIds{}), DomainError);
  }
}

TEST_CASE("trailing padding does not change the prediction") {
  auto m = make_classifier(ModelKind::kTlaNet, tiny_config());
  const auto a = m->predict(TokenIds{2, 5, 3}).probabilities;
  const auto b = m->predict(TokenIds{2, 5, 3, 0, 0, 0}).probabilities;
  CHECK(a == b);
  CHECK(trim_padding(TokenIds{0, 0}).size() == 1);
}

TEST_CASE("zero recurrent parameters give softmax(bias)") {
  LstmClassifier lstm(tiny_config());
  ParameterList lp;
  lstm.params().lstm.append_to(lp, "");
  for (auto& p : lp) std::fill(p.tensor.values().begin(), p.tensor.values().end(), 0.0);
  BiLstmClassifier bi(tiny_config());
  ParameterList bp;
  bi.params().forward.append_to(bp, "f.");
  bi.params().backward.append_to(bp, "b.");
  for (auto& p : bp) std::fill(p.tensor.values().begin(), p.tensor.values().end(), 0.0);

  auto expected = [](const DenseParams& head) {
    Tape t(Tape::Mode::kInference);
    Tensor p = softmax(t, head.bias);
    return std::vector<double>(p.values().begin(), p.values().end());
  };
  const auto want_lstm = expected(lstm.params().head);
  const auto want_bi = expected(bi.params().head);
  for (const TokenIds& ids : {TokenIds{2}, TokenIds{6, 5, 4, 3}, TokenIds{3, 3}}) {
    const auto got = lstm.predict(ids).probabilities;
    for (std::size_t k = 0; k < 3; ++k) CHECK(got[k] == want_lstm[k]);
    const auto got_bi = bi.predict(ids).probabilities;
    for (std::size_t k = 0; k < 3; ++k) CHECK(got_bi[k] == want_bi[k]);
  }
}

TEST_CASE("model gradients match finite differences") {
  SUBCASE("lstm") {
    LstmClassifier m(tiny_config());
    auto r = gradcheck(example_loss(m, {2, 4, 6, 3}, 1), m.parameters());
    CHECK(r.max_rel_error <= 1e-4);
  }
  SUBCASE("bilstm") {
    BiLstmClassifier m(tiny_config());
    auto r = gradcheck(example_loss(m, {2, 4, 6, 3}, 2), m.parameters());
    CHECK(r.max_rel_error <= 1e-4);
  }
  SUBCASE("lstm autoencoder, both reconstruction losses") {
    for (auto loss : {ReconstructionLoss::kMse, ReconstructionLoss::kBce}) {
      ClassifierConfig c = tiny_config();
      c.reconstruction = loss;
      LstmAutoencoder m(c);
      auto r = gradcheck(example_loss(m, {5, 2, 3}, 0), m.parameters());
      CHECK(r.max_rel_error <= 1e-4);
    }
  }
  SUBCASE("tla-net at hidden size 4") {
    ClassifierConfig c = tiny_config(4, 1);
    c.encoder_views = EncoderViews::kDistinctDropout;
    TlaNet m(c);
    auto r = gradcheck(example_loss(m, {3, 6, 2}, 1), m.parameters());
    MESSAGE("tla-net worst " << r.worst_tensor << " " << r.max_rel_error);
    CHECK(r.max_rel_error <= 1e-3);
  }
}

TEST_CASE("bilstm: reversed input with swapped directions is symmetric") {
  ClassifierConfig c = tiny_config();
  c.dropout = 0.0;
  BiLstmClassifier a(c);
  BiLstmClassifierParams swapped = a.params();
  // Deep copies, so the two models share no storage.
  swapped.embedding.table = a.params().embedding.table.detach();
  swapped.forward = StackedLSTMParams::zeros(c.embed_dim, c.hidden_size, c.num_layers);
  swapped.backward = StackedLSTMParams::zeros(c.embed_dim, c.hidden_size, c.num_layers);
  ParameterList src_f, src_b, dst_f, dst_b;
  a.params().forward.append_to(src_f, "");
  a.params().backward.append_to(src_b, "");
  swapped.forward.append_to(dst_f, "");
  swapped.backward.append_to(dst_b, "");
  copy_values(src_b, dst_f);
  copy_values(src_f, dst_b);
  // Head columns [W_fwd | W_bwd] swap blocks to follow the summary layout.
  const std::size_t h = c.hidden_size;
  swapped.head = DenseParams::zeros(2 * h, c.num_classes);
  swapped.head.bias = a.params().head.bias.detach();
  for (std::size_t k = 0; k < c.num_classes; ++k)
    for (std::size_t j = 0; j < h; ++j) {
      swapped.head.weights.values()[k * 2 * h + j] =
          a.params().head.weights.values()[k * 2 * h + h + j];
      swapped.head.weights.values()[k * 2 * h + h + j] =
          a.params().head.weights.values()[k * 2 * h + j];
    }
  BiLstmClassifier b(c, swapped);
  const auto pa = a.predict(TokenIds{2, 3, 6, 5}).probabilities;
  const auto pb = b.predict(TokenIds{5, 6, 3, 2}).probabilities;
  for (std::size_t k = 0; k < 3; ++k) CHECK(pa[k] == doctest::Approx(pb[k]).epsilon(1e-14));
}

TEST_CASE("meta-learner properties") {
  Rng rng(4);
  MetaLearnerParams m = MetaLearnerParams::init(5, rng);
  Tensor x = testing::random_tensor({5}, rng, -1, 1, false);
  Tape tape(Tape::Mode::kInference);
  std::array<Tensor, 3> same = {x, x, x};
  MetaLearnerResult r = meta_learner_combine(tape, m, same);
  for (std::size_t i = 0; i < 5; ++i)
    CHECK(r.weighted.at(i) == doctest::Approx(x.at(i)).epsilon(1e-15));

  std::array<Tensor, 3> mixed = {testing::random_tensor({5}, rng, -1, 1, false),
                                 testing::random_tensor({5}, rng, -1, 1, false),
                                 testing::random_tensor({5}, rng, -1, 1, false)};
  r = meta_learner_combine(tape, m, mixed);
  CHECK(std::fabs(total(r.weights) - 1.0) <= 1e-12);

  std::fill(m.scoring.values().begin(), m.scoring.values().end(), 0.0);
  r = meta_learner_combine(tape, m, mixed);
  for (std::size_t k = 0; k < 3; ++k) CHECK(r.weights.at(k) == 1.0 / 3.0);

  std::array<Tensor, 2> two = {x, x};
  CHECK_THROWS_AS(meta_learner_combine(tape, m, two), DimensionError);
  std::array<Tensor, 3> narrow = {x, x, Tensor::vector({1.0})};
  CHECK_THROWS_AS(meta_learner_combine(tape, m, narrow), DimensionError);
}

TEST_CASE("tla-net with identical encoders fuses to the common encoding") {
  ClassifierConfig c = tiny_config(4, 1);
  TlaNet net(c);
  ParameterList first;
  net.params().encoders[0].stage1.append_to(first, "");
  net.params().encoders[0].stage2.append_to(first, "");
  for (std::size_t k = 1; k < kTlaBranches; ++k) {
    ParameterList other;
    net.params().encoders[k].stage1.append_to(other, "");
    net.params().encoders[k].stage2.append_to(other, "");
    copy_values(first, other);
  }
  Tape tape(Tape::Mode::kInference);
  TlaTrace tr = net.trace(tape, TokenIds{2, 3, 4, 5}, {});
  for (std::size_t i = 0; i < c.hidden_size; ++i) {
    CHECK(tr.encodings[1].at(i) == tr.encodings[0].at(i));
    CHECK(tr.encoder_fusion.weighted.at(i) ==
          doctest::Approx(tr.encodings[0].at(i)).epsilon(1e-15));
  }
  CHECK(tr.result.reconstruction.shape() == Shape{4, c.embed_dim});
  CHECK(tr.fused_sequence.shape() == Shape{4, c.hidden_size});
  CHECK(std::fabs(total(tr.result.probs) - 1.0) <= 1e-12);
}

TEST_CASE("tla-net parameter construction checks widths") {
  ClassifierConfig c = tiny_config(4, 1);
  TlaNet net(c);
  TLANetParams bad = net.params();
  bad.decoder_meta = MetaLearnerParams::zeros(3);
  CHECK_THROWS_AS(TlaNet(c, bad), DimensionError);
}

TEST_CASE("lstm autoencoder overfits one sample") {
  ClassifierConfig c = tiny_config(8, 1);
  c.dropout = 0.0;
  c.detach_reconstruction_target = true;
  LstmAutoencoder m(c);
  std::vector<EncodedExample> one = {{{2, 5, 3, 6}, 1}};
  Adam adam(m.parameters(), {0.02});
  StepLosses last;
  for (std::size_t step = 0; step < 1500; ++step)
    last = train_step(m, one, adam, 1.0, 1, step);
  MESSAGE("R_loss after fit " << last.reconstruction);
  CHECK(m.predict(one[0].tokens).reconstruction_loss.value() <= 1e-3);
  CHECK(m.predict(one[0].tokens).probabilities.size() == 3);
}

TEST_CASE("word2vec classifier pools embeddings") {
  ClassifierConfig c = tiny_config();
  Word2VecClassifier m(c);
  CHECK(m.features(TokenIds{4}) == embedding_row(m.embeddings(), 4));
  CHECK(m.features(TokenIds{2, 5, 6}) == m.features(TokenIds{6, 2, 5}));
  CHECK(m.parameters().size() == 2);
}

TEST_CASE("config validation names the field") {
  ClassifierConfig c = tiny_config();
  c.dropout = 1.0;
  try {
    c.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("model.dropout") != std::string::npos);
  }
  CHECK_THROWS_AS(classifier_config_from_json({{"hidden", 3}}), ConfigError);
  const ClassifierConfig round = classifier_config_from_json(classifier_config_to_json(c));
  CHECK(round.dropout == c.dropout);
  CHECK(round.vocab_size == c.vocab_size);
}

// ---------------------------------------------------------------------------
// Training

std::vector<EncodedExample> toy_corpus() {
  return {{{2, 3, 0}, 0}, {{3, 2, 2}, 0}, {{4, 5, 0}, 1},
          {{5, 4, 4}, 1}, {{6, 6, 2}, 2}, {{6, 3, 0}, 2}};
}

TEST_CASE("lambda zero trains on classification only") {
  LstmAutoencoder m(tiny_config());
  Adam adam(m.parameters(), {0.01});
  auto data = toy_corpus();
  StepLosses s = train_step(m, data, adam, 0.0, 3, 0);
  CHECK(s.reconstruction > 0.0);
  CHECK(s.combined == s.classification);
  CHECK_THROWS_AS(train_step(m, data, adam, -1.0, 3, 1), ConfigError);
}

TEST_CASE("loss on a fixed batch decreases over 50 steps") {
  for (ModelKind kind : {ModelKind::kLstm, ModelKind::kTlaNet}) {
    auto m = make_classifier(kind, tiny_config(4, 1));
    Adam adam(m->parameters(), {0.02});
    auto data = toy_corpus();
    const double before = score_dataset(*m, data, 0.5).loss.combined;
    for (std::size_t step = 0; step < 50; ++step) train_step(*m, data, adam, 0.5, 5, step);
    CHECK(score_dataset(*m, data, 0.5).loss.combined < before);
  }
}

TEST_CASE("identical seeds give identical traces and checkpoints") {
  auto run = [] {
    TlaNet m(tiny_config(4, 1));
    TrainConfig cfg;
    cfg.adam.learning_rate = 0.01;
    cfg.adam.clip_norm = 1.0;
    cfg.batch_size = 4;
    cfg.epochs = 3;
    cfg.seed = 8;
    Adam adam(m.parameters(), cfg.adam);
    auto trace = train(m, toy_corpus(), adam, cfg);
    Vocabulary vocab = Vocabulary::from_tokens({"<pad>", "<unk>", "a", "b", "c", "d", "e"});
    return std::make_pair(trace, serialize_checkpoint(m, vocab, cfg.epochs, &adam));
  };
  auto [t1, c1] = run();
  auto [t2, c2] = run();
  REQUIRE(t1.size() == 3);
  for (std::size_t e = 0; e < t1.size(); ++e) {
    CHECK(t1[e].mean.combined == t2[e].mean.combined);
    CHECK(t1[e].mean.reconstruction == t2[e].mean.reconstruction);
  }
  CHECK(c1 == c2);
}

TEST_CASE("resuming from a checkpoint continues the same run") {
  TrainConfig cfg;
  cfg.adam.learning_rate = 0.01;
  cfg.batch_size = 4;
  cfg.epochs = 4;
  cfg.seed = 2;
  Vocabulary vocab = Vocabulary::from_tokens({"<pad>", "<unk>", "a", "b", "c", "d", "e"});

  LstmAutoencoder straight(tiny_config());
  Adam adam(straight.parameters(), cfg.adam);
  auto full = train(straight, toy_corpus(), adam, cfg);

  LstmAutoencoder first(tiny_config());
  Adam adam1(first.parameters(), cfg.adam);
  TrainConfig half = cfg;
  half.epochs = 2;
  train(first, toy_corpus(), adam1, half);
  LoadedCheckpoint ck = deserialize_checkpoint(serialize_checkpoint(first, vocab, 2, &adam1));
  Adam adam2(ck.model->parameters(), cfg.adam);
  restore_optimizer(adam2, *ck.optimizer);
  auto rest = train(*ck.model, toy_corpus(), adam2, cfg, ck.epochs_completed);
  REQUIRE(rest.size() == 2);
  CHECK(rest.back().mean.combined == full.back().mean.combined);
  CHECK(serialize_checkpoint(*ck.model, vocab, 4, &adam2) ==
        serialize_checkpoint(straight, vocab, 4, &adam));
}

TEST_CASE("checkpoint round trip and corruption") {
  for (ModelKind kind : {ModelKind::kLstm, ModelKind::kBiLstm,
                         ModelKind::kLstmAutoencoder,
                         ModelKind::kWord2VecFeatures, ModelKind::kTlaNet}) {
    CAPTURE(model_kind_name(kind));
    auto m = make_classifier(kind, tiny_config());
    m->attach_rejection_head(WisdomNetHead::init(3, m->features(TokenIds{2}).size(), 4, 0.7));
    Vocabulary vocab = Vocabulary::from_tokens({"<pad>", "<unk>", "a", "b", "c", "d", "e"});
    const std::string bytes = serialize_checkpoint(*m, vocab, 5, nullptr, {{"note", "x"}});
    LoadedCheckpoint ck = deserialize_checkpoint(bytes);
    CHECK(ck.model->kind() == kind);
    CHECK(ck.vocab == vocab);
    CHECK(ck.epochs_completed == 5);
    CHECK(ck.metadata["note"] == "x");
    REQUIRE(ck.model->rejection_head().has_value());
    CHECK(ck.model->rejection_head()->threshold == 0.7);
    CHECK(serialize_checkpoint(*ck.model, vocab, 5, nullptr, {{"note", "x"}}) == bytes);
    CHECK(ck.model->predict(TokenIds{2, 3}, 0.7).probabilities ==
          m->predict(TokenIds{2, 3}, 0.7).probabilities);

    CHECK_THROWS_AS(deserialize_checkpoint(bytes.substr(0, bytes.size() / 2)), ArtifactError);
    std::string bad_magic = bytes;
    bad_magic[0] = 'X';
    CHECK_THROWS_AS(deserialize_checkpoint(bad_magic), ArtifactError);
  }
  auto dir = testing::scratch_dir("ckpt");
  CHECK_THROWS_AS(load_checkpoint(dir / "missing.ckpt"), ArtifactError);
}

}  // namespace
}  // namespace tla
