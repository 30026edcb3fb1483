// beam.h
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

#ifndef MLNORM_BEAM_H_
#define MLNORM_BEAM_H_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mlnorm/ngram.h"
#include "mlnorm/scorer.h"
#include "mlnorm/vocabulary.h"

namespace mlnorm {

struct BeamConfig {
  std::size_t beam_size = 3;
  // Maximum number of output characters before EOS.
  std::size_t max_length = 20;

  void Validate() const;
};

// Output cap for a source word of n characters: max(20, 3n).
std::size_t DefaultMaxLength(std::size_t source_length);

// Log-linear weights of the character model and the segment LM.
struct FusionWeights {
  double nmt = 1.0;
  double lm = 0.0;

  void Validate() const;
};

struct Hypothesis {
  std::vector<int> symbols;  // emitted symbols, EOS included once closed
  double nmt_log_prob = 0.0;
  double lm_log_prob = 0.0;  // covers closed segments only
  std::vector<std::string> segment_history;
  std::string open_segment;
  DecoderState state;
  bool closed = false;

  double Score(const FusionWeights& w) const {
    return w.nmt * nmt_log_prob + w.lm * lm_log_prob;
  }
};

struct DecodeResult {
  std::vector<int> symbols;  // without EOS
  double score = 0.0;
  double nmt_log_prob = 0.0;
  double lm_log_prob = 0.0;
  bool truncated = false;
};

// Argmax chain; ties go to the lowest symbol index. BOS is never emitted.
DecodeResult GreedyDecode(const CharScorer& scorer, std::size_t max_length);

// Character-level beam search ranked by the character model alone.
DecodeResult BeamDecode(const CharScorer& scorer, const BeamConfig& cfg);

// Character-level beam search whose hypotheses are rescored with the
// segment LM whenever they emit SEG or EOS. The segment just closed is
// scored given the hypothesis' earlier segments; EOS additionally scores
// the sentence end. Open segments carry no LM score. Empty segments (from
// repeated or leading SEG) are skipped. `vocab` spells target symbols.
DecodeResult TwoLevelBeam(const CharScorer& scorer, const lm::NgramModel& lm,
                          const Vocabulary& vocab, const FusionWeights& weights,
                          const BeamConfig& cfg);

// Called with the pruned beam after every expansion step.
using BeamObserver = std::function<void(std::span<const Hypothesis>)>;

DecodeResult TwoLevelBeam(const CharScorer& scorer, const lm::NgramModel& lm,
                          const Vocabulary& vocab, const FusionWeights& weights,
                          const BeamConfig& cfg, const BeamObserver& observer);

// Checks chars == join(history, SEG) + open up to empty segments.
bool HypothesisConsistent(const Hypothesis& h, const Vocabulary& vocab);

// Total log-probability the scorer assigns to `symbols` followed by EOS.
double SequenceLogProb(const CharScorer& scorer, std::span<const int> symbols);

}  // namespace mlnorm

#endif  // MLNORM_BEAM_H_
