// testing.h
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

// Shared fixtures for the unit and acceptance tests.
#ifndef MLNORM_TESTS_TESTING_H_
#define MLNORM_TESTS_TESTING_H_

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mlnorm/corpus.h"
#include "mlnorm/model.h"
#include "mlnorm/scorer.h"
#include "mlnorm/vocabulary.h"

namespace mlnorm::testing {

// Per-step distributions given by an arbitrary function of the emitted
// prefix. The prefix travels in the decoder state.
class TableScorer : public CharScorer {
 public:
  using Table = std::function<std::vector<double>(const std::vector<int>& prefix)>;

  TableScorer(std::size_t vocab_size, Table table)
      : vocab_size_(vocab_size), table_(std::move(table)) {}

  std::size_t vocab_size() const override { return vocab_size_; }
  DecoderState Start() const override { return DecoderState{{{}}, {{}}}; }
  std::vector<double> Next(const DecoderState& state, int prev_symbol,
                           DecoderState* next) const override {
    std::vector<double> prefix = state.h.at(0);
    if (!(prefix.empty() && prev_symbol == kBos)) prefix.push_back(prev_symbol);
    std::vector<int> symbols(prefix.begin(), prefix.end());
    *next = DecoderState{{prefix}, {{}}};
    return table_(symbols);
  }

 private:
  std::size_t vocab_size_;
  Table table_;
};

// A random but fixed distribution for every prefix; BOS gets zero mass.
inline TableScorer RandomTableScorer(std::size_t vocab_size, std::uint64_t seed) {
  return TableScorer(vocab_size, [vocab_size, seed](const std::vector<int>& prefix) {
    std::seed_seq seq(prefix.begin(), prefix.end());
    std::vector<std::uint32_t> mix(1);
    seq.generate(mix.begin(), mix.end());
    std::mt19937_64 rng(seed * 1000003u + mix[0] + prefix.size());
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> p(vocab_size);
    double z = 0.0;
    for (std::size_t s = 0; s < vocab_size; ++s) {
      p[s] = s == static_cast<std::size_t>(kBos) ? 0.0 : u(rng);
      z += p[s];
    }
    for (double& v : p) v /= z;
    return p;
  });
}

inline std::map<std::string, std::size_t> CharCounts(const std::string& chars) {
  std::map<std::string, std::size_t> counts;
  for (char c : chars) ++counts[std::string(1, c)];
  return counts;
}

inline ModelVocabularies MakeVocabularies(const std::string& source_chars,
                                          const std::string& target_chars,
                                          const std::vector<std::string>& tags = {},
                                          const std::vector<std::string>& labels = {}) {
  ModelVocabularies v;
  v.source = BuildCharVocabulary(CharCounts(source_chars));
  v.target = BuildCharVocabulary(CharCounts(target_chars));
  std::map<std::string, std::size_t> t, l;
  for (const auto& s : tags) ++t[s];
  for (const auto& s : labels) ++l[s];
  v.tags = BuildTagVocabulary(t);
  v.tag_labels = BuildTagVocabulary(l);
  return v;
}

inline TrainingExample Example(std::string word, std::string target,
                               std::vector<std::string> tags = {},
                               std::vector<std::string> context = {},
                               std::size_t focus = 0) {
  TrainingExample ex;
  ex.input.word = std::move(word);
  ex.input.tags = std::move(tags);
  ex.input.context = std::move(context);
  ex.input.focus = focus;
  ex.target = std::move(target);
  return ex;
}

inline std::string RandomWord(std::mt19937_64& rng, const std::string& alphabet,
                              std::size_t min_len, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string w;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) w += alphabet[pick(rng)];
  return w;
}

// Distinct words over a..f; the target replaces every 'a' by 'x' and
// every 'b' by 'y'. One single-token segment per pair.
inline std::vector<ExampleGroup> CopySubstitutionCorpus(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::map<std::string, bool> seen;
  std::vector<ExampleGroup> out;
  while (out.size() < n) {
    const std::string w = RandomWord(rng, "abcdef", 3, 6);
    if (seen[w]) continue;
    seen[w] = true;
    std::string t = w;
    for (char& c : t) c = c == 'a' ? 'x' : c == 'b' ? 'y' : c;
    out.push_back({Example(w, t)});
  }
  return out;
}

// Segments [cue, amb] where the target of the ambiguous word depends on
// which class the preceding cue word belongs to. Cue words map to
// themselves.
inline Corpus NeighborCorpus(std::size_t segments, std::uint64_t seed,
                             const std::string& id_prefix) {
  const std::vector<std::string> cue_a = {"k", "kk", "kl"};
  const std::vector<std::string> cue_b = {"m", "mm", "ml"};
  const std::vector<std::pair<std::string, std::pair<std::string, std::string>>> amb = {
      {"ab", {"ac", "ad"}}, {"ba", {"ca", "da"}}};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coin(0, 1), which(0, 2), word(0, 1);
  Corpus c;
  for (std::size_t s = 0; s < segments; ++s) {
    const bool class_a = coin(rng) == 1;
    const std::string cue = class_a ? cue_a[which(rng)] : cue_b[which(rng)];
    const auto& [src, targets] = amb[word(rng)];
    const std::string id = id_prefix + std::to_string(s);
    Segment seg{id, {}};
    seg.tokens.push_back({id, 0, cue, cue, {}, false});
    seg.tokens.push_back({id, 1, src, class_a ? targets.first : targets.second, {}, false});
    c.segments.push_back(std::move(seg));
  }
  return c;
}

// Single-token segments whose target is determined by the gold tag.
inline Corpus PosCorpus(std::size_t segments, std::uint64_t seed, const std::string& id_prefix) {
  const std::vector<std::pair<std::string, std::pair<std::string, std::string>>> amb = {
      {"ab", {"ac", "ad"}}, {"ba", {"ca", "da"}}, {"abb", {"acc", "add"}}};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coin(0, 1), word(0, 2);
  Corpus c;
  for (std::size_t s = 0; s < segments; ++s) {
    const bool noun = coin(rng) == 1;
    const auto& [src, targets] = amb[word(rng)];
    const std::string id = id_prefix + std::to_string(s);
    Segment seg{id, {}};
    seg.tokens.push_back(
        {id, 0, src, noun ? targets.first : targets.second, {noun ? "N" : "V"}, true});
    c.segments.push_back(std::move(seg));
  }
  return c;
}

}  // namespace mlnorm::testing

#endif  // MLNORM_TESTS_TESTING_H_
