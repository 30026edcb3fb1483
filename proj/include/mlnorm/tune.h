// tune.h
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

#ifndef MLNORM_TUNE_H_
#define MLNORM_TUNE_H_

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mlnorm/beam.h"
#include "mlnorm/ngram.h"
#include "mlnorm/scorer.h"

namespace mlnorm {

struct TuneConfig {
  double lambda_max = 2.0;
  double grid_step = 0.05;
  // One bisection pass between the best grid point and its neighbours.
  bool refine = true;
};

struct TunePoint {
  double lambda_lm;
  double accuracy;
};

struct TuneResult {
  FusionWeights weights;
  double accuracy = 0.0;
  std::vector<TunePoint> trace;  // in evaluation order
};

// One dev word: a prepared scorer, its gold target, and how to spell a
// decoded symbol sequence.
struct TuneItem {
  const CharScorer* scorer;
  std::string gold;
  std::size_t max_length;
};

// Line search over lambda_lm with lambda_nmt fixed at 1: only the ratio
// matters for the argmax, so this is exact minimum-error-rate training for
// one free weight. Maximises dev word accuracy; ties go to the smaller
// lambda.
TuneResult TuneWeights(std::span<const TuneItem> dev, const lm::NgramModel& lm,
                       const Vocabulary& target_vocab, std::string_view boundary,
                       std::size_t beam_size, const TuneConfig& cfg = {});

// Dev accuracy at one weight setting.
double FusionAccuracy(std::span<const TuneItem> dev, const lm::NgramModel& lm,
                      const Vocabulary& target_vocab, std::string_view boundary,
                      std::size_t beam_size, const FusionWeights& weights);

}  // namespace mlnorm

#endif  // MLNORM_TUNE_H_
