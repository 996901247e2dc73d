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

#ifndef TLA_ERRORS_H_
#define TLA_ERRORS_H_

#include <stdexcept>
#include <string>

namespace tla {

// Root of every error the library throws. The CLI maps subclasses onto
// process exit codes (see cli.h).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of an operation (empty input, T == 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Caller broke an API contract (non-scalar loss, loss not on tape, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Non-finite loss or gradient during training.
class TrainingError : public Error {
 public:
  using Error::Error;
};

class AugmentationError : public Error {
 public:
  using Error::Error;
};

// A checkpoint or cache cannot be used with the data it is paired with.
class ArtifactError : public Error {
 public:
  using Error::Error;
};

}  // namespace tla

#endif  // TLA_ERRORS_H_
