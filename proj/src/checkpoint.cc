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

#include "tla/checkpoint.h"

#include <bit>
#include <cstring>

#include "tla/errors.h"
#include "tla/io.h"

namespace tla {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

using nlohmann::json;

json classifier_config_to_json(const ClassifierConfig& c) {
  return {{"vocab_size", c.vocab_size},
          {"embed_dim", c.embed_dim},
          {"hidden_size", c.hidden_size},
          {"num_layers", c.num_layers},
          {"dropout", c.dropout},
          {"num_classes", c.num_classes},
          {"max_len", c.max_len},
          {"seed", c.seed},
          {"reconstruction", reconstruction_loss_name(c.reconstruction)},
          {"detach_reconstruction_target", c.detach_reconstruction_target},
          {"classifier_tap", classifier_tap_name(c.classifier_tap)},
          {"encoder_views", encoder_views_name(c.encoder_views)}};
}

ClassifierConfig classifier_config_from_json(const json& j,
                                             ClassifierConfig c) {
  if (!j.is_object()) throw ConfigError("model config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    try {
      if (key == "vocab_size") c.vocab_size = v.get<std::size_t>();
      else if (key == "embed_dim") c.embed_dim = v.get<std::size_t>();
      else if (key == "hidden_size") c.hidden_size = v.get<std::size_t>();
      else if (key == "num_layers") c.num_layers = v.get<std::size_t>();
      else if (key == "dropout") c.dropout = v.get<double>();
      else if (key == "num_classes") c.num_classes = v.get<std::size_t>();
      else if (key == "max_len") c.max_len = v.get<std::size_t>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "reconstruction")
        c.reconstruction = parse_reconstruction_loss(v.get<std::string>());
      else if (key == "detach_reconstruction_target")
        c.detach_reconstruction_target = v.get<bool>();
      else if (key == "classifier_tap")
        c.classifier_tap = parse_classifier_tap(v.get<std::string>());
      else if (key == "encoder_views")
        c.encoder_views = parse_encoder_views(v.get<std::string>());
      else
        throw ConfigError("unknown key");
    } catch (const json::exception& e) {
      throw ConfigError("model." + key + ": wrong type (" + e.what() + ")");
    } catch (const ConfigError& e) {
      throw ConfigError("model." + key + ": " + e.what());
    }
  }
  return c;
}

namespace {

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    out_.append(static_cast<const char*>(p), n);
  }
  void u8(std::uint8_t v) { bytes(&v, 1); }
  void u32(std::uint32_t v) { bytes(&v, 4); }
  void u64(std::uint64_t v) { bytes(&v, 8); }
  void str32(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void f64s(std::span<const double> v) { bytes(v.data(), v.size() * 8); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  void bytes(void* p, std::size_t n) {
    if (n > in_.size() - pos_) throw ArtifactError("checkpoint is truncated");
    std::memcpy(p, in_.data() + pos_, n);
    pos_ += n;
  }
  std::uint8_t u8() { std::uint8_t v; bytes(&v, 1); return v; }
  std::uint32_t u32() { std::uint32_t v; bytes(&v, 4); return v; }
  std::uint64_t u64() { std::uint64_t v; bytes(&v, 8); return v; }
  std::string str(std::size_t n) {
    if (n > in_.size() - pos_) throw ArtifactError("checkpoint is truncated");
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::string str32() { return str(u32()); }
  void f64s(std::span<double> v) { bytes(v.data(), v.size() * 8); }
  bool done() const { return pos_ == in_.size(); }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

constexpr char kMagic[8] = {'T', 'L', 'A', 'C', 'K', 'P', 'T', '\0'};

}  // namespace

std::string serialize_checkpoint(const SequenceClassifier& model,
                                 const Vocabulary& vocab,
                                 std::size_t epochs_completed,
                                 const Adam* optimizer, const json& metadata) {
  if (vocab.size() != model.config().vocab_size) {
    throw ArtifactError("vocabulary of " + std::to_string(vocab.size()) +
                        " tokens does not match model vocab_size " +
                        std::to_string(model.config().vocab_size));
  }
  json header = {{"model", model_kind_name(model.kind())},
                 {"config", classifier_config_to_json(model.config())},
                 {"vocab_hash", vocab.content_hash()},
                 {"epochs_completed", epochs_completed},
                 {"optimizer_steps", optimizer ? optimizer->steps_taken() : 0},
                 {"metadata", metadata}};
  if (model.rejection_head()) header["threshold"] = model.rejection_head()->threshold;

  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.u32(kCheckpointVersion);
  const std::string h = header.dump();
  w.u64(h.size());
  w.bytes(h.data(), h.size());
  w.u64(vocab.size());
  for (const std::string& t : vocab.tokens()) w.str32(t);
  const ParameterList state = model.state();
  w.u64(state.size());
  for (const NamedTensor& p : state) {
    w.str32(p.name);
    w.u32(static_cast<std::uint32_t>(p.tensor.rank()));
    for (std::size_t d : p.tensor.shape()) w.u64(d);
    w.f64s(p.tensor.values());
  }
  if (optimizer) {
    const Adam& adam = *optimizer;
    w.u8(1);
    w.u64(adam.first_moments().size());
    for (std::size_t i = 0; i < adam.first_moments().size(); ++i) {
      w.u64(adam.first_moments()[i].size());
      w.f64s(adam.first_moments()[i]);
      w.f64s(adam.second_moments()[i]);
    }
  } else {
    w.u8(0);
  }
  return w.take();
}

namespace {

LoadedCheckpoint deserialize(std::string_view bytes) {
  Reader r(bytes);
  char magic[8];
  r.bytes(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw ArtifactError("not a checkpoint (bad magic number)");
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw ArtifactError("unsupported checkpoint version " +
                        std::to_string(version));
  }
  json header;
  try {
    header = json::parse(r.str(r.u64()));
  } catch (const json::exception& e) {
    throw ArtifactError(std::string("corrupt checkpoint header: ") + e.what());
  }

  LoadedCheckpoint out;
  std::vector<std::string> tokens(r.u64());
  for (std::string& t : tokens) t = r.str32();
  out.vocab = Vocabulary::from_tokens(std::move(tokens));
  if (out.vocab.content_hash() != header.at("vocab_hash").get<std::string>())
    throw ArtifactError("checkpoint vocabulary does not match its recorded hash");

  ClassifierConfig config;
  ModelKind kind;
  try {
    config = classifier_config_from_json(header.at("config"));
    kind = parse_model_kind(header.at("model").get<std::string>());
  } catch (const ConfigError& e) {
    throw ArtifactError(std::string("checkpoint header: ") + e.what());
  }
  out.model = make_classifier(kind, config);
  out.epochs_completed = header.at("epochs_completed").get<std::size_t>();
  out.metadata = header.at("metadata");

  const std::size_t count = r.u64();
  struct Saved {
    std::string name;
    Shape shape;
    std::vector<double> values;
  };
  std::vector<Saved> saved(count);
  for (Saved& s : saved) {
    s.name = r.str32();
    s.shape.resize(r.u32());
    for (std::size_t& d : s.shape) d = r.u64();
    s.values.resize(shape_numel(s.shape));
    r.f64s(s.values);
  }
  if (header.contains("threshold")) {
    WisdomNetHead head;
    for (const Saved& s : saved) {
      if (s.name == "rejection.W") head.weights = Tensor(s.shape, s.values, true);
      if (s.name == "rejection.b") head.bias = Tensor(s.shape, s.values, true);
    }
    if (!head.weights.defined() || !head.bias.defined())
      throw ArtifactError("checkpoint threshold set but rejection head missing");
    head.threshold = header.at("threshold").get<double>();
    out.model->attach_rejection_head(std::move(head));
  }
  const ParameterList state = out.model->state();
  if (state.size() != saved.size()) {
    throw ArtifactError("checkpoint holds " + std::to_string(saved.size()) +
                        " tensors, model expects " + std::to_string(state.size()));
  }
  for (std::size_t i = 0; i < saved.size(); ++i) {
    Tensor dst = state[i].tensor;
    if (saved[i].name != state[i].name || saved[i].shape != dst.shape()) {
      throw ArtifactError("checkpoint tensor '" + saved[i].name + "' " +
                          shape_string(saved[i].shape) + " does not match '" +
                          state[i].name + "' " + shape_string(dst.shape()));
    }
    std::copy(saved[i].values.begin(), saved[i].values.end(), dst.values().begin());
  }

  if (r.u8() == 1) {
    OptimizerState opt;
    opt.steps = header.at("optimizer_steps").get<std::uint64_t>();
    const std::size_t n = r.u64();
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> m(r.u64()), v(m.size());
      r.f64s(m);
      r.f64s(v);
      opt.first_moments.push_back(std::move(m));
      opt.second_moments.push_back(std::move(v));
    }
    out.optimizer = std::move(opt);
  }
  if (!r.done()) throw ArtifactError("trailing bytes after checkpoint");
  return out;
}

}  // namespace

LoadedCheckpoint deserialize_checkpoint(std::string_view bytes) {
  try {
    return deserialize(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError(std::string("checkpoint header: ") + e.what());
  } catch (const std::length_error&) {
    throw ArtifactError("checkpoint is corrupt");
  } catch (const std::bad_alloc&) {
    throw ArtifactError("checkpoint is corrupt");
  }
}

void save_checkpoint(const std::filesystem::path& path,
                     const SequenceClassifier& model, const Vocabulary& vocab,
                     std::size_t epochs_completed, const Adam* optimizer,
                     const json& metadata) {
  write_file_atomic(path, serialize_checkpoint(model, vocab, epochs_completed,
                                               optimizer, metadata));
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
  std::string bytes;
  try {
    bytes = read_file(path);
  } catch (const IoError& e) {
    throw ArtifactError(e.what());
  }
  return deserialize_checkpoint(bytes);
}

void restore_optimizer(Adam& optimizer, const OptimizerState& state) {
  auto& m = optimizer.first_moments();
  auto& v = optimizer.second_moments();
  if (state.first_moments.size() != m.size())
    throw ArtifactError("optimizer state does not match the parameter list");
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (state.first_moments[i].size() != m[i].size())
      throw ArtifactError("optimizer moment size mismatch at tensor " +
                          std::to_string(i));
    m[i] = state.first_moments[i];
    v[i] = state.second_moments[i];
  }
  optimizer.set_steps_taken(state.steps);
}

}  // namespace tla
