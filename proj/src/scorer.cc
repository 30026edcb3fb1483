// scorer.cc
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

#include "mlnorm/scorer.h"

#include "mlnorm/errors.h"

namespace mlnorm {

ModelScorer::ModelScorer(const Seq2SeqModel& model, const SourceInput& input)
    : model_(model), prepared_(model.Prepare(input)) {}

DecoderState ModelScorer::Start() const {
  return {{prepared_.init_h}, {prepared_.init_c}};
}

std::vector<double> ModelScorer::Next(const DecoderState& state, int prev_symbol,
                                      DecoderState* next) const {
  std::vector<double> h, c;
  std::vector<double> dist =
      model_.StepDistribution(prepared_, state.h.at(0), state.c.at(0), prev_symbol,
                              &h, &c);
  if (next) {
    next->h = {std::move(h)};
    next->c = {std::move(c)};
  }
  return dist;
}

std::vector<double> EnsembleDistribution(std::span<const std::vector<double>> members) {
  if (members.empty()) throw ConfigError("ensemble with no members");
  const std::size_t k = members.front().size();
  std::vector<double> mean(k, 0.0);
  for (const auto& m : members) {
    if (m.size() != k) throw ConfigError("ensemble members disagree on vocabulary size");
    for (std::size_t i = 0; i < k; ++i) mean[i] += m[i];
  }
  double total = 0.0;
  for (double& v : mean) {
    v /= static_cast<double>(members.size());
    total += v;
  }
  for (double& v : mean) v /= total;
  return mean;
}

void CheckCompatible(std::span<const Seq2SeqModel> members) {
  if (members.empty()) throw ConfigError("ensemble with no members");
  const Seq2SeqModel& first = members.front();
  for (const Seq2SeqModel& m : members) {
    if (!(m.vocab().source == first.vocab().source) ||
        !(m.vocab().target == first.vocab().target) ||
        !(m.vocab().tags == first.vocab().tags) ||
        !(m.vocab().tag_labels == first.vocab().tag_labels))
      throw ConfigError("ensemble members have different vocabularies");
    if (m.variant() != first.variant() || m.boundary() != first.boundary())
      throw ConfigError("ensemble members have different variants");
  }
}

EnsembleScorer::EnsembleScorer(std::span<const Seq2SeqModel> members,
                               const SourceInput& input)
    : members_(members) {
  CheckCompatible(members);
  for (const Seq2SeqModel& m : members) prepared_.push_back(m.Prepare(input));
}

DecoderState EnsembleScorer::Start() const {
  DecoderState s;
  for (const PreparedSource& p : prepared_) {
    s.h.push_back(p.init_h);
    s.c.push_back(p.init_c);
  }
  return s;
}

std::vector<double> EnsembleScorer::Next(const DecoderState& state, int prev_symbol,
                                         DecoderState* next) const {
  std::vector<std::vector<double>> dists;
  DecoderState out;
  out.h.resize(members_.size());
  out.c.resize(members_.size());
  for (std::size_t m = 0; m < members_.size(); ++m)
    dists.push_back(members_[m].StepDistribution(prepared_[m], state.h.at(m),
                                                 state.c.at(m), prev_symbol,
                                                 &out.h[m], &out.c[m]));
  if (next) *next = std::move(out);
  return EnsembleDistribution(dists);
}

}  // namespace mlnorm
