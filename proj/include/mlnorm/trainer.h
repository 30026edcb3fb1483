// trainer.h
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

#ifndef MLNORM_TRAINER_H_
#define MLNORM_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlnorm/model.h"
#include "mlnorm/nn/sgd.h"

namespace mlnorm {

// Examples of one segment; they share their context.
using ExampleGroup = std::vector<TrainingExample>;

struct TrainConfig {
  std::size_t max_epochs = 30;
  // Stop after this many epochs without a dev-accuracy improvement.
  std::size_t patience = 10;
  nn::SgdConfig sgd;
  double alpha = 0.2;
  // Also stop once dev accuracy reaches this value.
  std::optional<double> target_accuracy;
  bool shuffle = true;
};

struct EpochRecord {
  std::size_t member = 0;
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double dev_accuracy = 0.0;
  double best_dev_accuracy = 0.0;
  bool improved = false;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

struct TrainOutcome {
  Seq2SeqModel model;  // best-dev checkpoint
  std::vector<EpochRecord> log;
  std::size_t best_epoch = 0;
  double best_dev_accuracy = 0.0;
};

// Greedy-decoded exact-match accuracy of one model.
double ModelAccuracy(const Seq2SeqModel& model, std::span<const ExampleGroup> data);
std::string GreedyNormalize(const Seq2SeqModel& model, const SourceInput& input);

// Trains one initialised model with per-example (or, for context variants,
// per-segment) SGD. Training units are reshuffled every epoch with an RNG
// seeded by `seed`. The dev set drives early stopping and best-checkpoint
// selection; with an empty dev set the last epoch is kept.
TrainOutcome TrainModel(Seq2SeqModel model, std::span<const ExampleGroup> train,
                        std::span<const ExampleGroup> dev, const TrainConfig& cfg,
                        std::uint64_t seed, std::size_t member = 0,
                        const EpochCallback& on_epoch = {});

struct EnsembleConfig {
  std::size_t size = 5;
  std::uint64_t base_seed = 1;
  // Explicit per-member seeds; default base_seed + k.
  std::vector<std::uint64_t> seeds;
  std::size_t threads = 1;

  std::uint64_t SeedFor(std::size_t member) const;
};

// Trains `cfg.size` independent copies of `prototype`, each initialised and
// shuffled with its own seed. Members may train in parallel.
std::vector<TrainOutcome> TrainEnsemble(const Seq2SeqModel& prototype,
                                        std::span<const ExampleGroup> train,
                                        std::span<const ExampleGroup> dev,
                                        const TrainConfig& train_cfg,
                                        const EnsembleConfig& ensemble_cfg,
                                        const EpochCallback& on_epoch = {});

}  // namespace mlnorm

#endif  // MLNORM_TRAINER_H_
