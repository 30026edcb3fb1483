// pipeline.cc
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

#include "mlnorm/pipeline.h"

#include "mlnorm/errors.h"
#include "mlnorm/nn/checkpoint.h"
#include "mlnorm/scorer.h"
#include "mlnorm/utf8.h"

namespace mlnorm {

namespace {

std::filesystem::path MemberPath(const std::filesystem::path& dir, std::size_t k) {
  return dir / ("model." + std::to_string(k) + ".ckpt");
}

}  // namespace

void SaveEnsemble(const std::filesystem::path& dir, std::span<const Seq2SeqModel> members) {
  std::filesystem::create_directories(dir);
  for (std::size_t k = 0; k < members.size(); ++k)
    nn::SaveCheckpoint(MemberPath(dir, k).string(), members[k].ToCheckpoint());
}

std::vector<Seq2SeqModel> LoadEnsemble(const std::filesystem::path& dir) {
  std::vector<Seq2SeqModel> members;
  for (std::size_t k = 0; std::filesystem::exists(MemberPath(dir, k)); ++k)
    members.push_back(
        Seq2SeqModel::FromCheckpoint(nn::LoadCheckpoint(MemberPath(dir, k).string())));
  if (members.empty()) throw InputError("no model.0.ckpt in " + dir.string());
  CheckCompatible(members);
  return members;
}

std::string Normalize(std::span<const Seq2SeqModel> members, const SourceInput& input,
                      const DecodeOptions& opts) {
  if (members.empty()) throw ConfigError("empty ensemble");
  const EnsembleScorer scorer(members, input);
  BeamConfig cfg;
  cfg.beam_size = opts.beam_size;
  cfg.max_length = opts.max_length.value_or(DefaultMaxLength(SplitChars(input.word).size()));
  const Seq2SeqModel& first = members.front();
  const DecodeResult r =
      opts.lm ? TwoLevelBeam(scorer, *opts.lm, first.vocab().target, opts.weights, cfg)
              : BeamDecode(scorer, cfg);
  return DecodeTarget(first.vocab().target, r.symbols, first.boundary());
}

std::vector<std::vector<std::string>> LmSentences(std::span<const std::string> targets,
                                                  std::string_view boundary) {
  std::vector<std::vector<std::string>> out;
  for (const std::string& t : targets) {
    std::vector<std::string> tokens;
    for (std::string& piece : SplitOn(t, boundary))
      if (!piece.empty()) tokens.push_back(std::move(piece));
    if (!tokens.empty()) out.push_back(std::move(tokens));
  }
  return out;
}

}  // namespace mlnorm
