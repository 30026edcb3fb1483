// tune.cc
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

#include "mlnorm/tune.h"

#include <cmath>

#include "mlnorm/errors.h"

namespace mlnorm {

double FusionAccuracy(std::span<const TuneItem> dev, const lm::NgramModel& lm,
                      const Vocabulary& target_vocab, std::string_view boundary,
                      std::size_t beam_size, const FusionWeights& weights) {
  if (dev.empty()) throw InputError("tuning needs a nonempty dev set");
  std::size_t correct = 0;
  for (const TuneItem& item : dev) {
    const BeamConfig cfg{beam_size, item.max_length};
    const DecodeResult r = TwoLevelBeam(*item.scorer, lm, target_vocab, weights, cfg);
    if (DecodeTarget(target_vocab, r.symbols, boundary) == item.gold) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(dev.size());
}

TuneResult TuneWeights(std::span<const TuneItem> dev, const lm::NgramModel& lm,
                       const Vocabulary& target_vocab, std::string_view boundary,
                       std::size_t beam_size, const TuneConfig& cfg) {
  if (dev.empty()) throw InputError("tuning needs a nonempty dev set");
  if (!(cfg.grid_step > 0.0) || !(cfg.lambda_max >= 0.0))
    throw ConfigError("bad tuning grid");
  TuneResult result;
  auto evaluate = [&](double lambda) {
    const double acc =
        FusionAccuracy(dev, lm, target_vocab, boundary, beam_size, {1.0, lambda});
    result.trace.push_back({lambda, acc});
    const bool better =
        acc > result.accuracy ||
        (acc == result.accuracy && lambda < result.weights.lm) ||
        result.trace.size() == 1;
    if (better) {
      result.accuracy = acc;
      result.weights = {1.0, lambda};
    }
  };

  const auto steps = static_cast<std::size_t>(std::floor(cfg.lambda_max / cfg.grid_step + 1e-9));
  for (std::size_t i = 0; i <= steps; ++i) evaluate(static_cast<double>(i) * cfg.grid_step);

  if (cfg.refine) {
    const double best = result.weights.lm;
    const double half = cfg.grid_step / 2.0;
    if (best - half >= 0.0) evaluate(best - half);
    if (best + half <= cfg.lambda_max) evaluate(best + half);
  }
  return result;
}

}  // namespace mlnorm
