// scorer.h
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

#ifndef MLNORM_SCORER_H_
#define MLNORM_SCORER_H_

#include <cstddef>
#include <span>
#include <vector>

#include "mlnorm/model.h"

namespace mlnorm {

// Opaque recurrent state carried by a hypothesis; one (h, c) pair per
// ensemble member.
struct DecoderState {
  std::vector<std::vector<double>> h;
  std::vector<std::vector<double>> c;
};

// Source of per-step character distributions for one input word.
// Implementations are immutable once built and safe to share.
class CharScorer {
 public:
  virtual ~CharScorer() = default;
  virtual std::size_t vocab_size() const = 0;
  virtual DecoderState Start() const = 0;
  // p(. | prefix) after feeding prev_symbol; writes the successor state.
  virtual std::vector<double> Next(const DecoderState& state, int prev_symbol,
                                   DecoderState* next) const = 0;
};

class ModelScorer : public CharScorer {
 public:
  ModelScorer(const Seq2SeqModel& model, const SourceInput& input);

  std::size_t vocab_size() const override { return model_.output_size(); }
  DecoderState Start() const override;
  std::vector<double> Next(const DecoderState& state, int prev_symbol,
                           DecoderState* next) const override;
  const PreparedSource& prepared() const { return prepared_; }

 private:
  const Seq2SeqModel& model_;
  PreparedSource prepared_;
};

// Arithmetic mean of member probability vectors, renormalised.
std::vector<double> EnsembleDistribution(std::span<const std::vector<double>> members);

// Averages the per-step distributions of several models that share their
// vocabularies.
class EnsembleScorer : public CharScorer {
 public:
  EnsembleScorer(std::span<const Seq2SeqModel> members, const SourceInput& input);

  std::size_t vocab_size() const override { return members_.front().output_size(); }
  DecoderState Start() const override;
  std::vector<double> Next(const DecoderState& state, int prev_symbol,
                           DecoderState* next) const override;

 private:
  std::span<const Seq2SeqModel> members_;
  std::vector<PreparedSource> prepared_;
};

// Throws ConfigError unless every member shares the first member's
// vocabularies, variant and boundary.
void CheckCompatible(std::span<const Seq2SeqModel> members);

}  // namespace mlnorm

#endif  // MLNORM_SCORER_H_
