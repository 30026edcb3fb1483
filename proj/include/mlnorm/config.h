// config.h
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

#ifndef MLNORM_CONFIG_H_
#define MLNORM_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlnorm/model.h"
#include "mlnorm/ngram.h"
#include "mlnorm/task.h"
#include "mlnorm/trainer.h"

namespace mlnorm {

struct RunConfig {
  Task task = Task::kNormalization;
  Variant variant = Variant::kPlain;
  std::size_t char_embedding = 100;
  std::size_t pos_embedding = 50;
  std::size_t hidden = 200;
  std::size_t ensemble = 5;
  std::optional<std::size_t> max_epochs;  // task default when unset
  std::size_t patience = 10;
  double alpha = 0.2;
  std::size_t beam = 3;
  std::size_t lm_order = 3;
  lm::Smoothing lm_smoothing = lm::Smoothing::kWittenBell;
  double learning_rate = 0.1;
  std::optional<double> clip_norm = 5.0;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::optional<std::string> boundary;  // task default when unset
  std::optional<std::size_t> max_length;
  bool expected_pos_embedding = false;
  bool ignore_case = false;

  std::size_t ResolvedMaxEpochs() const;
  std::string ResolvedBoundary() const;
  ModelDims Dims() const;
  TrainConfig Training() const;
  EnsembleConfig Ensemble() const;
  lm::NgramOptions LanguageModel() const;

  // Sets one key; throws ConfigError on an unknown key or bad value.
  void Set(std::string_view key, std::string_view value);
  // Reads "key = value" lines; '#' starts a comment.
  void MergeFile(const std::filesystem::path& path);
  void MergeStream(std::istream& in, std::string_view source_name);
  void Validate() const;

  // Every key with its resolved value, one "key = value" per line.
  std::string ToString() const;
  static const std::vector<std::string>& Keys();
};

}  // namespace mlnorm

#endif  // MLNORM_CONFIG_H_
