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

#include "tla/models.h"

#include <cmath>

#include "tla/errors.h"
#include "tla/losses.h"
#include "tla/ops.h"
#include "tla/rng.h"

namespace tla {

std::string_view model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLstm: return "lstm";
    case ModelKind::kBiLstm: return "bilstm";
    case ModelKind::kLstmAutoencoder: return "lstm-ae";
    case ModelKind::kWord2VecFeatures: return "word2vec-features";
    case ModelKind::kTlaNet: return "tla-net";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  for (ModelKind k : {ModelKind::kLstm, ModelKind::kBiLstm,
                      ModelKind::kLstmAutoencoder, ModelKind::kWord2VecFeatures,
                      ModelKind::kTlaNet}) {
    if (model_kind_name(k) == name) return k;
  }
  throw ConfigError("unknown model kind '" + std::string(name) +
                    "' (expected lstm, bilstm, lstm-ae, word2vec-features or "
                    "tla-net)");
}

std::string_view reconstruction_loss_name(ReconstructionLoss loss) {
  return loss == ReconstructionLoss::kMse ? "mse" : "bce";
}

ReconstructionLoss parse_reconstruction_loss(std::string_view name) {
  if (name == "mse") return ReconstructionLoss::kMse;
  if (name == "bce") return ReconstructionLoss::kBce;
  throw ConfigError("unknown reconstruction loss '" + std::string(name) + "'");
}

std::string_view classifier_tap_name(ClassifierTap tap) {
  return tap == ClassifierTap::kFusedEncoding ? "fused-encoding"
                                              : "reconstruction";
}

ClassifierTap parse_classifier_tap(std::string_view name) {
  if (name == "fused-encoding") return ClassifierTap::kFusedEncoding;
  if (name == "reconstruction") return ClassifierTap::kReconstruction;
  throw ConfigError("unknown classifier tap '" + std::string(name) + "'");
}

std::string_view encoder_views_name(EncoderViews views) {
  return views == EncoderViews::kShared ? "shared" : "distinct-dropout";
}

EncoderViews parse_encoder_views(std::string_view name) {
  if (name == "shared") return EncoderViews::kShared;
  if (name == "distinct-dropout") return EncoderViews::kDistinctDropout;
  throw ConfigError("unknown encoder views '" + std::string(name) + "'");
}

void ClassifierConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError("model." + field + ": " + why);
  };
  if (vocab_size < 2) fail("vocab_size", "must be >= 2");
  if (embed_dim < 1) fail("embed_dim", "must be >= 1");
  if (hidden_size < 1) fail("hidden_size", "must be >= 1");
  if (num_layers < 1) fail("num_layers", "must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) fail("dropout", "must lie in [0, 1)");
  if (num_classes < 2) fail("num_classes", "must be >= 2");
  if (max_len < 1) fail("max_len", "must be >= 1");
}

std::span<const std::size_t> trim_padding(std::span<const std::size_t> tokens) {
  std::size_t n = tokens.size();
  while (n > 1 && tokens[n - 1] == 0) --n;
  return tokens.first(n);
}

// ---------------------------------------------------------------------------

SequenceClassifier::SequenceClassifier(ClassifierConfig config)
    : config_(std::move(config)) {
  config_.validate();
}

ParameterList SequenceClassifier::state() const {
  ParameterList out = parameters();
  if (rejection_head_) rejection_head_->append_to(out, "rejection.");
  return out;
}

bool SequenceClassifier::has_reconstruction() const {
  return kind() == ModelKind::kLstmAutoencoder || kind() == ModelKind::kTlaNet;
}

void SequenceClassifier::attach_rejection_head(WisdomNetHead head) {
  head.validate();
  if (head.num_classes() != config_.num_classes) {
    throw DimensionError("rejection head has " +
                         std::to_string(head.num_classes()) +
                         " classes, model has " +
                         std::to_string(config_.num_classes));
  }
  rejection_head_ = std::move(head);
}

ModelOutput SequenceClassifier::predict(std::span<const std::size_t> tokens,
                                        std::optional<double> threshold) const {
  Tape tape(Tape::Mode::kInference);
  ForwardResult r = forward(tape, tokens, {});
  ModelOutput out;
  out.probabilities.assign(r.probs.values().begin(), r.probs.values().end());
  if (r.reconstruction_loss.defined())
    out.reconstruction_loss = r.reconstruction_loss.item();
  if (threshold) {
    if (rejection_head_) {
      out.decision =
          wisdomnet_classify(*rejection_head_, r.features.values(), *threshold);
    } else {
      out.decision = classify_probabilities(out.probabilities, *threshold);
    }
  }
  return out;
}

std::vector<double> SequenceClassifier::features(
    std::span<const std::size_t> tokens) const {
  Tape tape(Tape::Mode::kInference);
  ForwardResult r = forward(tape, tokens, {});
  return {r.features.values().begin(), r.features.values().end()};
}

namespace {

std::span<const std::size_t> checked_tokens(std::span<const std::size_t> tokens) {
  if (tokens.empty()) throw DomainError("classifier input is empty");
  return trim_padding(tokens);
}

// Reconstruction of the embedded input (MSE) or of the one-hot tokens (BCE)
// from decoder states; returns {reconstruction, loss}.
std::pair<Tensor, Tensor> reconstruct(Tape& tape, const DenseParams& head,
                                      const Tensor& decoded,
                                      const Tensor& embedded,
                                      std::span<const std::size_t> tokens,
                                      const ClassifierConfig& config) {
  Tensor logits = linear_rows(tape, head.weights, decoded, head.bias);
  if (config.reconstruction == ReconstructionLoss::kMse) {
    const Tensor target = config.detach_reconstruction_target
                              ? embedded.detach()
                              : embedded;
    return {logits, r_loss(tape, target, logits)};
  }
  Tensor probs = activation(tape, logits, Activation::kSigmoid);
  const std::size_t vocab = head.out();
  std::vector<double> targets(tokens.size() * vocab, 0.0);
  for (std::size_t t = 0; t < tokens.size(); ++t) targets[t * vocab + tokens[t]] = 1.0;
  return {probs, bce(tape, probs, targets)};
}

std::size_t reconstruction_width(const ClassifierConfig& c) {
  return c.reconstruction == ReconstructionLoss::kMse ? c.embed_dim
                                                      : c.vocab_size;
}

}  // namespace

// ---------------------------------------------------------------------------
// LSTM

LstmClassifier::LstmClassifier(const ClassifierConfig& config)
    : SequenceClassifier(config) {
  Rng rng(config.seed);
  p_.embedding = EmbeddingTable::init(config.vocab_size, config.embed_dim, rng);
  p_.lstm = StackedLSTMParams::init(config.embed_dim, config.hidden_size,
                                    config.num_layers, config.dropout, rng);
  p_.head = DenseParams::init(config.hidden_size, config.num_classes, rng);
}

LstmClassifier::LstmClassifier(const ClassifierConfig& config,
                               LstmClassifierParams params)
    : SequenceClassifier(config), p_(std::move(params)) {
  p_.lstm.validate();
}

ForwardResult LstmClassifier::forward(Tape& tape,
                                      std::span<const std::size_t> tokens,
                                      const ForwardOptions& options) const {
  tokens = checked_tokens(tokens);
  Tensor x = embedding_lookup(tape, p_.embedding, tokens);
  LSTMOutput h = lstm_forward(tape, p_.lstm, x, options.training, options.seed);
  ForwardResult r;
  r.features = h.last_hidden();
  r.probs = dense_forward(tape, p_.head, r.features, DenseActivation::kSoftmax);
  return r;
}

ParameterList LstmClassifier::parameters() const {
  ParameterList out;
  p_.embedding.append_to(out, "embedding.");
  p_.lstm.append_to(out, "lstm.");
  p_.head.append_to(out, "head.");
  return out;
}

// ---------------------------------------------------------------------------
// BiLSTM

BiLstmClassifier::BiLstmClassifier(const ClassifierConfig& config)
    : SequenceClassifier(config) {
  Rng rng(config.seed);
  p_.embedding = EmbeddingTable::init(config.vocab_size, config.embed_dim, rng);
  p_.forward = StackedLSTMParams::init(config.embed_dim, config.hidden_size,
                                       config.num_layers, config.dropout, rng);
  p_.backward = StackedLSTMParams::init(config.embed_dim, config.hidden_size,
                                        config.num_layers, config.dropout, rng);
  p_.head = DenseParams::init(2 * config.hidden_size, config.num_classes, rng);
}

BiLstmClassifier::BiLstmClassifier(const ClassifierConfig& config,
                                   BiLstmClassifierParams params)
    : SequenceClassifier(config), p_(std::move(params)) {}

ForwardResult BiLstmClassifier::forward(Tape& tape,
                                        std::span<const std::size_t> tokens,
                                        const ForwardOptions& options) const {
  tokens = checked_tokens(tokens);
  Tensor x = embedding_lookup(tape, p_.embedding, tokens);
  BiLSTMOutput h = bilstm_forward(tape, p_.forward, p_.backward, x,
                                  options.training, options.seed);
  ForwardResult r;
  r.features = h.summary;
  r.probs = dense_forward(tape, p_.head, r.features, DenseActivation::kSoftmax);
  return r;
}

ParameterList BiLstmClassifier::parameters() const {
  ParameterList out;
  p_.embedding.append_to(out, "embedding.");
  p_.forward.append_to(out, "forward.");
  p_.backward.append_to(out, "backward.");
  p_.head.append_to(out, "head.");
  return out;
}

// ---------------------------------------------------------------------------
// LSTM autoencoder

LstmAutoencoder::LstmAutoencoder(const ClassifierConfig& config)
    : SequenceClassifier(config) {
  Rng rng(config.seed);
  const std::size_t h = config.hidden_size;
  p_.embedding = EmbeddingTable::init(config.vocab_size, config.embed_dim, rng);
  p_.encoder = StackedLSTMParams::init(config.embed_dim, h, config.num_layers,
                                       config.dropout, rng);
  p_.decoder = StackedLSTMParams::init(h, h, config.num_layers, config.dropout, rng);
  p_.reconstruction = DenseParams::init(h, reconstruction_width(config), rng);
  p_.head = DenseParams::init(h, config.num_classes, rng);
}

LstmAutoencoder::LstmAutoencoder(const ClassifierConfig& config,
                                 LstmAutoencoderParams params)
    : SequenceClassifier(config), p_(std::move(params)) {}

ForwardResult LstmAutoencoder::forward(Tape& tape,
                                       std::span<const std::size_t> tokens,
                                       const ForwardOptions& options) const {
  tokens = checked_tokens(tokens);
  const std::size_t steps = tokens.size();
  Tensor x = embedding_lookup(tape, p_.embedding, tokens);
  LSTMOutput enc = lstm_forward(tape, p_.encoder, x, options.training,
                                mix_seed(options.seed, 1));
  Tensor z = enc.last_hidden();
  LSTMOutput dec = lstm_forward(tape, p_.decoder, repeat_vector(tape, z, steps),
                                options.training, mix_seed(options.seed, 2));
  ForwardResult r;
  std::tie(r.reconstruction, r.reconstruction_loss) =
      reconstruct(tape, p_.reconstruction, dec.hidden_sequence, x, tokens,
                  config_);
  r.features = z;
  r.probs = dense_forward(tape, p_.head, z, DenseActivation::kSoftmax);
  return r;
}

ParameterList LstmAutoencoder::parameters() const {
  ParameterList out;
  p_.embedding.append_to(out, "embedding.");
  p_.encoder.append_to(out, "encoder.");
  p_.decoder.append_to(out, "decoder.");
  p_.reconstruction.append_to(out, "reconstruction.");
  p_.head.append_to(out, "head.");
  return out;
}

// ---------------------------------------------------------------------------
// Word2vec features

Word2VecClassifier::Word2VecClassifier(const ClassifierConfig& config)
    : SequenceClassifier(config) {
  std::vector<std::size_t> uniform(config.vocab_size, 1);
  uniform[0] = 0;
  const std::size_t negatives = std::min<std::size_t>(5, config.vocab_size - 1);
  w2v_ = Word2VecModel::create(uniform, config.embed_dim, negatives, config.seed);
  Rng rng(mix_seed(config.seed, 1));
  head_ = DenseParams::init(config.embed_dim, config.num_classes, rng);
}

Word2VecClassifier::Word2VecClassifier(const ClassifierConfig& config,
                                       Word2VecModel embeddings, DenseParams head)
    : SequenceClassifier(config), w2v_(std::move(embeddings)), head_(std::move(head)) {}

Word2VecTrainReport Word2VecClassifier::pretrain(
    const std::vector<TokenIds>& corpus, std::span<const std::size_t> counts,
    Word2VecConfig w2v) {
  w2v.dim = config_.embed_dim;
  Word2VecModel fresh =
      Word2VecModel::create(counts, w2v.dim, w2v.negatives, w2v.seed);
  Word2VecTrainReport report = word2vec_train(fresh, corpus, w2v);
  copy_values(ParameterList{{"input", fresh.input_embeddings},
                            {"output", fresh.output_embeddings}},
              ParameterList{{"input", w2v_.input_embeddings},
                            {"output", w2v_.output_embeddings}});
  w2v_.negatives = fresh.negatives;
  w2v_.sampling_table = std::move(fresh.sampling_table);
  return report;
}

ForwardResult Word2VecClassifier::forward(Tape& tape,
                                          std::span<const std::size_t> tokens,
                                          const ForwardOptions&) const {
  tokens = checked_tokens(tokens);
  ForwardResult r;
  r.features = Tensor::vector(word2vec_features(w2v_, tokens));
  r.probs = dense_forward(tape, head_, r.features, DenseActivation::kSoftmax);
  return r;
}

ParameterList Word2VecClassifier::parameters() const {
  ParameterList out;
  head_.append_to(out, "head.");
  return out;
}

ParameterList Word2VecClassifier::state() const {
  ParameterList out;
  w2v_.append_to(out, "word2vec.");
  head_.append_to(out, "head.");
  if (rejection_head_) rejection_head_->append_to(out, "rejection.");
  return out;
}

// ---------------------------------------------------------------------------
// Meta-learner

MetaLearnerParams MetaLearnerParams::init(std::size_t width, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(width));
  MetaLearnerParams m;
  m.scoring = uniform_parameter({width}, bound, rng);
  m.w_in = uniform_parameter({width, width}, bound, rng);
  m.w_rec = uniform_parameter({width, width}, bound, rng);
  m.bias = uniform_parameter({width}, bound, rng);
  return m;
}

MetaLearnerParams MetaLearnerParams::zeros(std::size_t width) {
  MetaLearnerParams m;
  m.scoring = Tensor({width}, true);
  m.w_in = Tensor({width, width}, true);
  m.w_rec = Tensor({width, width}, true);
  m.bias = Tensor({width}, true);
  return m;
}

void MetaLearnerParams::append_to(ParameterList& out,
                                  const std::string& prefix) const {
  out.push_back({prefix + "scoring", scoring});
  out.push_back({prefix + "W_in", w_in});
  out.push_back({prefix + "W_rec", w_rec});
  out.push_back({prefix + "b", bias});
}

MetaLearnerResult meta_learner_combine(Tape& tape, const MetaLearnerParams& m,
                                       std::span<const Tensor> inputs) {
  if (inputs.size() != kTlaBranches) {
    throw DimensionError("meta-learner expects " + std::to_string(kTlaBranches) +
                         " inputs, got " + std::to_string(inputs.size()));
  }
  for (const Tensor& x : inputs) {
    if (x.shape() != Shape{m.width()}) {
      throw DimensionError("meta-learner input of shape " +
                           shape_string(x.shape()) + " does not match width " +
                           std::to_string(m.width()));
    }
  }
  MetaLearnerResult r;
  Tensor scores = matvec(tape, stack_rows(tape, inputs), m.scoring);
  r.weights = softmax(tape, scores);
  r.weighted = weighted_sum(tape, r.weights, inputs);
  Tensor h = r.weighted;
  for (const Tensor& x : inputs) {
    h = activation(tape, gate_preactivation(tape, m.w_in, x, m.w_rec, h, m.bias),
                   Activation::kTanh);
  }
  r.output = h;
  return r;
}

// ---------------------------------------------------------------------------
// TLA-Net

namespace {

StackedBranch init_branch(std::size_t input, const ClassifierConfig& c, Rng& rng) {
  StackedBranch b;
  b.stage1 = StackedLSTMParams::init(input, c.hidden_size, c.num_layers,
                                     c.dropout, rng);
  b.stage2 = StackedLSTMParams::init(c.hidden_size, c.hidden_size, c.num_layers,
                                     c.dropout, rng);
  return b;
}

LSTMOutput run_branch(Tape& tape, const StackedBranch& b, const Tensor& input,
                      bool training, std::uint64_t seed) {
  const std::size_t steps = input.dim(0);
  LSTMOutput s1 = lstm_forward(tape, b.stage1, input, training, mix_seed(seed, 0));
  return lstm_forward(tape, b.stage2, repeat_vector(tape, s1.last_hidden(), steps),
                      training, mix_seed(seed, 1));
}

void check_branch(const StackedBranch& b, std::size_t input, std::size_t hidden,
                  const std::string& name) {
  b.stage1.validate();
  b.stage2.validate();
  if (b.stage1.input_size() != input || b.stage1.hidden_size() != hidden ||
      b.stage2.input_size() != hidden || b.stage2.hidden_size() != hidden) {
    throw DimensionError(name + " widths do not match input " +
                         std::to_string(input) + ", hidden " +
                         std::to_string(hidden));
  }
}

}  // namespace

TlaNet::TlaNet(const ClassifierConfig& config) : SequenceClassifier(config) {
  Rng rng(config.seed);
  const std::size_t h = config.hidden_size;
  p_.embedding = EmbeddingTable::init(config.vocab_size, config.embed_dim, rng);
  for (auto& e : p_.encoders) e = init_branch(config.embed_dim, config, rng);
  p_.encoder_meta = MetaLearnerParams::init(h, rng);
  for (auto& d : p_.decoders) d = init_branch(h, config, rng);
  p_.decoder_meta = MetaLearnerParams::init(h, rng);
  p_.reconstruction = DenseParams::init(h, reconstruction_width(config), rng);
  const std::size_t tap = config.classifier_tap == ClassifierTap::kFusedEncoding
                              ? h
                              : reconstruction_width(config);
  p_.hidden_fc = DenseParams::init(tap, h, rng);
  p_.output_fc = DenseParams::init(h, config.num_classes, rng);
}

TlaNet::TlaNet(const ClassifierConfig& config, TLANetParams params)
    : SequenceClassifier(config), p_(std::move(params)) {
  const std::size_t h = config.hidden_size;
  for (std::size_t k = 0; k < kTlaBranches; ++k) {
    check_branch(p_.encoders[k], config.embed_dim, h,
                 "encoder " + std::to_string(k + 1));
    check_branch(p_.decoders[k], h, h, "decoder " + std::to_string(k + 1));
  }
  if (p_.encoder_meta.width() != h || p_.decoder_meta.width() != h) {
    throw DimensionError("meta-learner width must equal hidden size " +
                         std::to_string(h));
  }
}

TlaTrace TlaNet::trace(Tape& tape, std::span<const std::size_t> tokens,
                       const ForwardOptions& options) const {
  tokens = checked_tokens(tokens);
  const std::size_t steps = tokens.size();
  const bool training = options.training;
  TlaTrace tr;
  tr.embedded = embedding_lookup(tape, p_.embedding, tokens);

  for (std::size_t k = 0; k < kTlaBranches; ++k) {
    Tensor view = tr.embedded;
    if (training && config_.encoder_views == EncoderViews::kDistinctDropout) {
      Rng rng(mix_seed(options.seed, 100 + k));
      view = dropout(tape, view, config_.dropout, rng);
    }
    tr.encodings[k] = run_branch(tape, p_.encoders[k], view, training,
                                 mix_seed(options.seed, 10 + k))
                          .last_hidden();
  }
  tr.encoder_fusion = meta_learner_combine(tape, p_.encoder_meta, tr.encodings);

  Tensor repeated = repeat_vector(tape, tr.encoder_fusion.output, steps);
  for (std::size_t k = 0; k < kTlaBranches; ++k) {
    tr.decoded[k] = run_branch(tape, p_.decoders[k], repeated, training,
                               mix_seed(options.seed, 20 + k))
                        .hidden_sequence;
  }
  std::vector<Tensor> fused_rows;
  fused_rows.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    const std::array<Tensor, kTlaBranches> at = {
        row(tape, tr.decoded[0], t), row(tape, tr.decoded[1], t),
        row(tape, tr.decoded[2], t)};
    fused_rows.push_back(meta_learner_combine(tape, p_.decoder_meta, at).output);
  }
  tr.fused_sequence = stack_rows(tape, fused_rows);

  ForwardResult& r = tr.result;
  std::tie(r.reconstruction, r.reconstruction_loss) =
      reconstruct(tape, p_.reconstruction, tr.fused_sequence, tr.embedded,
                  tokens, config_);
  Tensor tap = config_.classifier_tap == ClassifierTap::kFusedEncoding
                   ? tr.encoder_fusion.output
                   : mean_rows(tape, r.reconstruction);
  r.features = dense_forward(tape, p_.hidden_fc, tap, DenseActivation::kRelu);
  r.probs = dense_forward(tape, p_.output_fc, r.features, DenseActivation::kSoftmax);
  return tr;
}

ForwardResult TlaNet::forward(Tape& tape, std::span<const std::size_t> tokens,
                              const ForwardOptions& options) const {
  return trace(tape, tokens, options).result;
}

ParameterList TlaNet::parameters() const {
  ParameterList out;
  p_.embedding.append_to(out, "embedding.");
  for (std::size_t k = 0; k < kTlaBranches; ++k) {
    const std::string e = "encoder" + std::to_string(k + 1) + ".";
    p_.encoders[k].stage1.append_to(out, e + "stage1.");
    p_.encoders[k].stage2.append_to(out, e + "stage2.");
  }
  p_.encoder_meta.append_to(out, "encoder_meta.");
  for (std::size_t k = 0; k < kTlaBranches; ++k) {
    const std::string d = "decoder" + std::to_string(k + 1) + ".";
    p_.decoders[k].stage1.append_to(out, d + "stage1.");
    p_.decoders[k].stage2.append_to(out, d + "stage2.");
  }
  p_.decoder_meta.append_to(out, "decoder_meta.");
  p_.reconstruction.append_to(out, "reconstruction.");
  p_.hidden_fc.append_to(out, "fc1.");
  p_.output_fc.append_to(out, "fc2.");
  return out;
}

std::unique_ptr<SequenceClassifier> make_classifier(ModelKind kind,
                                                    const ClassifierConfig& config) {
  switch (kind) {
    case ModelKind::kLstm: return std::make_unique<LstmClassifier>(config);
    case ModelKind::kBiLstm: return std::make_unique<BiLstmClassifier>(config);
    case ModelKind::kLstmAutoencoder:
      return std::make_unique<LstmAutoencoder>(config);
    case ModelKind::kWord2VecFeatures:
      return std::make_unique<Word2VecClassifier>(config);
    case ModelKind::kTlaNet: return std::make_unique<TlaNet>(config);
  }
  throw ConfigError("unknown model kind");
}

}  // namespace tla
