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

#ifndef TLA_MODELS_H_
#define TLA_MODELS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tla/layers.h"
#include "tla/tensor.h"
#include "tla/wisdomnet.h"
#include "tla/word2vec.h"

namespace tla {

enum class ModelKind { kLstm, kBiLstm, kLstmAutoencoder, kWord2VecFeatures, kTlaNet };
std::string_view model_kind_name(ModelKind kind);  // lstm, bilstm, ...
ModelKind parse_model_kind(std::string_view name);

enum class ReconstructionLoss { kMse, kBce };
enum class ClassifierTap { kFusedEncoding, kReconstruction };
enum class EncoderViews { kShared, kDistinctDropout };
std::string_view reconstruction_loss_name(ReconstructionLoss loss);
ReconstructionLoss parse_reconstruction_loss(std::string_view name);
std::string_view classifier_tap_name(ClassifierTap tap);
ClassifierTap parse_classifier_tap(std::string_view name);
std::string_view encoder_views_name(EncoderViews views);
EncoderViews parse_encoder_views(std::string_view name);

struct ClassifierConfig {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 64;
  std::size_t hidden_size = 128;
  std::size_t num_layers = 3;
  double dropout = 0.2;
  std::size_t num_classes = 3;
  std::size_t max_len = 128;
  std::uint64_t seed = 0;
  // Autoencoder models only.
  ReconstructionLoss reconstruction = ReconstructionLoss::kMse;
  // When set, the embedded input acts as a constant MSE target; otherwise
  // the reconstruction loss also trains the embedding table.
  bool detach_reconstruction_target = false;
  // TLA-Net only.
  ClassifierTap classifier_tap = ClassifierTap::kFusedEncoding;
  EncoderViews encoder_views = EncoderViews::kShared;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

struct ForwardOptions {
  bool training = false;
  std::uint64_t seed = 0;  // dropout masks
};

// Tape-level result of one example's forward pass.
struct ForwardResult {
  Tensor probs;                // [num_classes]
  Tensor features;             // input of the final softmax layer
  Tensor reconstruction;       // [T, width], autoencoders only
  Tensor reconstruction_loss;  // scalar, autoencoders only
};

struct ModelOutput {
  std::vector<double> probabilities;
  std::optional<double> reconstruction_loss;
  std::optional<Classification> decision;
};

class SequenceClassifier {
 public:
  virtual ~SequenceClassifier() = default;

  virtual ModelKind kind() const = 0;
  const ClassifierConfig& config() const { return config_; }

  // Throws DomainError on an empty token sequence.
  virtual ForwardResult forward(Tape& tape, std::span<const std::size_t> tokens,
                                const ForwardOptions& options) const = 0;
  // Tensors updated by training.
  virtual ParameterList parameters() const = 0;
  // Everything a checkpoint stores, including frozen tensors and the
  // rejection head when attached.
  virtual ParameterList state() const;

  bool has_reconstruction() const;

  void attach_rejection_head(WisdomNetHead head);
  void detach_rejection_head() { rejection_head_.reset(); }
  const std::optional<WisdomNetHead>& rejection_head() const {
    return rejection_head_;
  }

  // Inference-mode forward. With `threshold` set the decision comes from
  // the rejection head when attached, else from the class probabilities.
  ModelOutput predict(std::span<const std::size_t> tokens,
                      std::optional<double> threshold = std::nullopt) const;
  // Features feeding the final softmax layer, in inference mode.
  std::vector<double> features(std::span<const std::size_t> tokens) const;

 protected:
  explicit SequenceClassifier(ClassifierConfig config);

  ClassifierConfig config_;
  std::optional<WisdomNetHead> rejection_head_;
};

// Drops trailing padding; leaves at least one id so an all-padding input
// still has a step.
std::span<const std::size_t> trim_padding(std::span<const std::size_t> tokens);

// ---------------------------------------------------------------------------

struct LstmClassifierParams {
  EmbeddingTable embedding;
  StackedLSTMParams lstm;
  DenseParams head;  // hidden -> classes, softmax
};

class LstmClassifier : public SequenceClassifier {
 public:
  explicit LstmClassifier(const ClassifierConfig& config);
  LstmClassifier(const ClassifierConfig& config, LstmClassifierParams params);

  ModelKind kind() const override { return ModelKind::kLstm; }
  ForwardResult forward(Tape& tape, std::span<const std::size_t> tokens,
                        const ForwardOptions& options) const override;
  ParameterList parameters() const override;
  LstmClassifierParams& params() { return p_; }

 private:
  LstmClassifierParams p_;
};

struct BiLstmClassifierParams {
  EmbeddingTable embedding;
  StackedLSTMParams forward;
  StackedLSTMParams backward;
  DenseParams head;  // 2 hidden -> classes over [final fwd, final bwd]
};

class BiLstmClassifier : public SequenceClassifier {
 public:
  explicit BiLstmClassifier(const ClassifierConfig& config);
  BiLstmClassifier(const ClassifierConfig& config, BiLstmClassifierParams params);

  ModelKind kind() const override { return ModelKind::kBiLstm; }
  ForwardResult forward(Tape& tape, std::span<const std::size_t> tokens,
                        const ForwardOptions& options) const override;
  ParameterList parameters() const override;
  BiLstmClassifierParams& params() { return p_; }

 private:
  BiLstmClassifierParams p_;
};

struct LstmAutoencoderParams {
  EmbeddingTable embedding;
  StackedLSTMParams encoder;
  StackedLSTMParams decoder;
  DenseParams reconstruction;  // hidden -> embed (MSE) or vocab (BCE)
  DenseParams head;            // hidden -> classes on the encoder state
};

class LstmAutoencoder : public SequenceClassifier {
 public:
  explicit LstmAutoencoder(const ClassifierConfig& config);
  LstmAutoencoder(const ClassifierConfig& config, LstmAutoencoderParams params);

  ModelKind kind() const override { return ModelKind::kLstmAutoencoder; }
  ForwardResult forward(Tape& tape, std::span<const std::size_t> tokens,
                        const ForwardOptions& options) const override;
  ParameterList parameters() const override;
  LstmAutoencoderParams& params() { return p_; }

 private:
  LstmAutoencoderParams p_;
};

// Pooled skip-gram features into a linear softmax head. The embeddings are
// trained separately (word2vec_train) and frozen here.
class Word2VecClassifier : public SequenceClassifier {
 public:
  // Builds untrained embeddings with uniform negative-sampling counts; call
  // pretrain() before fitting the head.
  explicit Word2VecClassifier(const ClassifierConfig& config);
  Word2VecClassifier(const ClassifierConfig& config, Word2VecModel embeddings,
                     DenseParams head);

  ModelKind kind() const override { return ModelKind::kWord2VecFeatures; }
  ForwardResult forward(Tape& tape, std::span<const std::size_t> tokens,
                        const ForwardOptions& options) const override;
  ParameterList parameters() const override;
  ParameterList state() const override;

  Word2VecTrainReport pretrain(const std::vector<TokenIds>& corpus,
                               std::span<const std::size_t> counts,
                               Word2VecConfig w2v);
  const Word2VecModel& embeddings() const { return w2v_; }

 private:
  Word2VecModel w2v_;
  DenseParams head_;
};

// ---------------------------------------------------------------------------
// TLA-Net

// Attention scores a . x_k -> softmax weights w; the weighted sum seeds a
// simple tanh recurrence h_k = tanh(W_in x_k + W_rec h_{k-1} + b) that reads
// the inputs in order; the final h is the fused output.
struct MetaLearnerParams {
  Tensor scoring;  // [width]
  Tensor w_in;     // [width, width]
  Tensor w_rec;    // [width, width]
  Tensor bias;     // [width]

  static MetaLearnerParams init(std::size_t width, Rng& rng);
  static MetaLearnerParams zeros(std::size_t width);
  std::size_t width() const { return scoring.dim(0); }
  void append_to(ParameterList& out, const std::string& prefix) const;
};

struct MetaLearnerResult {
  Tensor weights;   // [3] attention distribution
  Tensor weighted;  // sum_k w_k x_k
  Tensor output;    // recurrent combiner output
};

MetaLearnerResult meta_learner_combine(Tape& tape, const MetaLearnerParams& m,
                                       std::span<const Tensor> inputs);

// stage 1 -> repeat(last hidden, T) -> stage 2.
struct StackedBranch {
  StackedLSTMParams stage1;
  StackedLSTMParams stage2;
};

inline constexpr std::size_t kTlaBranches = 3;

struct TLANetParams {
  EmbeddingTable embedding;
  std::array<StackedBranch, kTlaBranches> encoders;
  MetaLearnerParams encoder_meta;
  std::array<StackedBranch, kTlaBranches> decoders;
  MetaLearnerParams decoder_meta;
  DenseParams reconstruction;  // hidden -> embed (MSE) or vocab (BCE)
  DenseParams hidden_fc;       // tap width -> hidden, relu
  DenseParams output_fc;       // hidden -> classes, softmax
};

// Intermediate values of one TLA-Net pass, for tests and diagnostics.
struct TlaTrace {
  Tensor embedded;                           // [T, embed]
  std::array<Tensor, kTlaBranches> encodings;  // final stage-2 hidden
  MetaLearnerResult encoder_fusion;
  std::array<Tensor, kTlaBranches> decoded;    // [T, hidden] each
  Tensor fused_sequence;                     // [T, hidden]
  ForwardResult result;
};

class TlaNet : public SequenceClassifier {
 public:
  explicit TlaNet(const ClassifierConfig& config);
  TlaNet(const ClassifierConfig& config, TLANetParams params);

  ModelKind kind() const override { return ModelKind::kTlaNet; }
  ForwardResult forward(Tape& tape, std::span<const std::size_t> tokens,
                        const ForwardOptions& options) const override;
  TlaTrace trace(Tape& tape, std::span<const std::size_t> tokens,
                 const ForwardOptions& options) const;
  ParameterList parameters() const override;
  TLANetParams& params() { return p_; }
  const TLANetParams& params() const { return p_; }

 private:
  TLANetParams p_;
};

// Freshly initialized model of the given kind.
std::unique_ptr<SequenceClassifier> make_classifier(ModelKind kind,
                                                    const ClassifierConfig& config);

}  // namespace tla

#endif  // TLA_MODELS_H_
