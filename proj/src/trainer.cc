// trainer.cc
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

#include "mlnorm/trainer.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "mlnorm/beam.h"
#include "mlnorm/errors.h"
#include "mlnorm/scorer.h"

namespace mlnorm {

std::string GreedyNormalize(const Seq2SeqModel& model, const SourceInput& input) {
  const ModelScorer scorer(model, input);
  const std::size_t cap = DefaultMaxLength(scorer.prepared().source_length);
  const DecodeResult r = GreedyDecode(scorer, cap);
  return DecodeTarget(model.vocab().target, r.symbols, model.boundary());
}

double ModelAccuracy(const Seq2SeqModel& model, std::span<const ExampleGroup> data) {
  std::size_t total = 0, correct = 0;
  for (const ExampleGroup& group : data)
    for (const TrainingExample& ex : group) {
      ++total;
      if (GreedyNormalize(model, ex.input) == ex.target) ++correct;
    }
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

TrainOutcome TrainModel(Seq2SeqModel model, std::span<const ExampleGroup> train,
                        std::span<const ExampleGroup> dev, const TrainConfig& cfg,
                        std::uint64_t seed, std::size_t member,
                        const EpochCallback& on_epoch) {
  cfg.sgd.Validate();
  if (train.empty()) throw InputError("empty training set");

  // Context variants train per segment; the others per example.
  std::vector<std::span<const TrainingExample>> units;
  for (const ExampleGroup& g : train) {
    if (UsesContext(model.variant())) {
      if (!g.empty()) units.emplace_back(g);
    } else {
      for (const TrainingExample& ex : g) units.emplace_back(&ex, 1);
    }
  }
  if (units.empty()) throw InputError("empty training set");

  std::mt19937_64 rng(seed);
  const std::vector<nn::Parameter*> params = model.Parameters();
  for (nn::Parameter* p : params) p->ZeroGrad();

  TrainOutcome out;
  out.model = model;
  out.best_dev_accuracy = -1.0;
  std::size_t since_best = 0;
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    if (cfg.shuffle) std::shuffle(units.begin(), units.end(), rng);
    double epoch_loss = 0.0;
    for (const auto& unit : units) {
      nn::Graph g;
      const nn::Expr loss = model.TrainingLoss(g, unit, cfg.alpha);
      const double value = g.Scalar(loss);
      if (!std::isfinite(value))
        throw NumericError("member " + std::to_string(member) + " epoch " +
                           std::to_string(epoch) + ": non-finite loss");
      epoch_loss += value;
      g.Backward(loss);
      nn::SgdStep(params, cfg.sgd);
    }

    EpochRecord rec;
    rec.member = member;
    rec.epoch = epoch;
    rec.train_loss = epoch_loss / static_cast<double>(units.size());
    rec.dev_accuracy = dev.empty() ? 0.0 : ModelAccuracy(model, dev);
    rec.improved = dev.empty() || rec.dev_accuracy > out.best_dev_accuracy;
    if (rec.improved) {
      out.model = model;
      out.best_epoch = epoch;
      out.best_dev_accuracy = rec.dev_accuracy;
      since_best = 0;
    } else {
      ++since_best;
    }
    rec.best_dev_accuracy = out.best_dev_accuracy;
    out.log.push_back(rec);
    if (on_epoch) on_epoch(rec);
    if (!dev.empty() && since_best >= cfg.patience) break;
    if (cfg.target_accuracy && !dev.empty() && rec.dev_accuracy >= *cfg.target_accuracy)
      break;
  }
  for (nn::Parameter* p : out.model.Parameters()) p->ZeroGrad();
  return out;
}

std::uint64_t EnsembleConfig::SeedFor(std::size_t member) const {
  if (member < seeds.size()) return seeds[member];
  return base_seed + member;
}

std::vector<TrainOutcome> TrainEnsemble(const Seq2SeqModel& prototype,
                                        std::span<const ExampleGroup> train,
                                        std::span<const ExampleGroup> dev,
                                        const TrainConfig& train_cfg,
                                        const EnsembleConfig& ensemble_cfg,
                                        const EpochCallback& on_epoch) {
  if (ensemble_cfg.size == 0) throw ConfigError("ensemble size must be >= 1");
  std::vector<TrainOutcome> outcomes(ensemble_cfg.size);
  std::vector<std::exception_ptr> errors(ensemble_cfg.size);
  std::mutex callback_mutex;
  EpochCallback guarded;
  if (on_epoch)
    guarded = [&](const EpochRecord& r) {
      std::lock_guard<std::mutex> lock(callback_mutex);
      on_epoch(r);
    };

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t m = next++; m < ensemble_cfg.size; m = next++) {
      try {
        Seq2SeqModel model = prototype;
        const std::uint64_t seed = ensemble_cfg.SeedFor(m);
        model.Init(seed);
        outcomes[m] = TrainModel(std::move(model), train, dev, train_cfg, seed, m, guarded);
      } catch (...) {
        errors[m] = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::clamp<std::size_t>(ensemble_cfg.threads, 1, ensemble_cfg.size);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return outcomes;
}

}  // namespace mlnorm
