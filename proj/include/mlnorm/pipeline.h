// pipeline.h
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

#ifndef MLNORM_PIPELINE_H_
#define MLNORM_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlnorm/beam.h"
#include "mlnorm/model.h"
#include "mlnorm/ngram.h"

namespace mlnorm {

// Ensemble members live in `dir` as model.0.ckpt, model.1.ckpt, ...
void SaveEnsemble(const std::filesystem::path& dir, std::span<const Seq2SeqModel> members);
std::vector<Seq2SeqModel> LoadEnsemble(const std::filesystem::path& dir);

struct DecodeOptions {
  std::size_t beam_size = 3;
  std::optional<std::size_t> max_length;  // DefaultMaxLength when unset
  const lm::NgramModel* lm = nullptr;     // two-level decoding when set
  FusionWeights weights;
};

// Decodes one word with the ensemble average.
std::string Normalize(std::span<const Seq2SeqModel> members, const SourceInput& input,
                      const DecodeOptions& opts);

// Splits each target into LM tokens on `boundary`, dropping empty pieces.
// Targets with no nonempty piece are skipped.
std::vector<std::vector<std::string>> LmSentences(std::span<const std::string> targets,
                                                  std::string_view boundary);

}  // namespace mlnorm

#endif  // MLNORM_PIPELINE_H_
