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

#ifndef TLA_CHECKPOINT_H_
#define TLA_CHECKPOINT_H_

// Checkpoint container, little-endian throughout:
//
//   magic      8 bytes  "TLACKPT\0"
//   version    u32      kCheckpointVersion
//   header     u64 length + UTF-8 JSON: model kind, classifier config,
//              vocabulary hash, epochs completed, rejection threshold,
//              optimizer step count, free-form metadata
//   vocab      u64 count, then per token u32 length + bytes
//   tensors    u64 count, then per tensor u32 name length + name,
//              u32 rank, rank x u64 dims, numel x f64 values
//   optimizer  u8 present; when 1, u64 count and per tensor the first and
//              second Adam moments as numel x f64 each
//
// The tensor section is the model's state() list in order.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tla/models.h"
#include "tla/optim.h"
#include "tla/text.h"

namespace tla {

inline constexpr std::uint32_t kCheckpointVersion = 1;

nlohmann::json classifier_config_to_json(const ClassifierConfig& config);
// Missing keys keep the values of `defaults`; unknown keys throw
// ConfigError.
ClassifierConfig classifier_config_from_json(const nlohmann::json& j,
                                             ClassifierConfig defaults = {});

struct OptimizerState {
  std::uint64_t steps = 0;
  std::vector<std::vector<double>> first_moments;
  std::vector<std::vector<double>> second_moments;
};

struct LoadedCheckpoint {
  std::unique_ptr<SequenceClassifier> model;
  Vocabulary vocab;
  std::size_t epochs_completed = 0;
  std::optional<OptimizerState> optimizer;
  nlohmann::json metadata;
};

std::string serialize_checkpoint(const SequenceClassifier& model,
                                 const Vocabulary& vocab,
                                 std::size_t epochs_completed,
                                 const Adam* optimizer,
                                 const nlohmann::json& metadata = {});

// Throws ArtifactError on a bad magic number, version, truncation or any
// tensor whose name or shape disagrees with the rebuilt model.
LoadedCheckpoint deserialize_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path& path,
                     const SequenceClassifier& model, const Vocabulary& vocab,
                     std::size_t epochs_completed, const Adam* optimizer,
                     const nlohmann::json& metadata = {});
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

// Copies saved moments into an optimizer built over the same parameters.
void restore_optimizer(Adam& optimizer, const OptimizerState& state);

}  // namespace tla

#endif  // TLA_CHECKPOINT_H_
