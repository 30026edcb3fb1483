// lexicon.cc
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

#include "mlnorm/lexicon.h"

#include <algorithm>
#include <cctype>
#include <random>

#include "mlnorm/errors.h"
#include "mlnorm/nn/tensor.h"
#include "mlnorm/utf8.h"

namespace mlnorm {

TrainLexicon TrainLexicon::Build(std::span<const LexiconEntry> train,
                                 std::string_view boundary) {
  if (boundary.empty()) throw ConfigError("empty morpheme boundary");
  TrainLexicon lex;
  lex.boundary_ = std::string(boundary);
  for (const LexiconEntry& e : train) {
    ++lex.word_targets_[e.word][e.target];
    ++lex.word_tag_targets_[{e.word, e.tag}][e.target];
    lex.segmentations_.insert(e.target);
    for (std::string& m : lex.Morphemes(e.target)) lex.morphemes_.insert(std::move(m));
    ++lex.occurrences_;
  }
  return lex;
}

const TargetCounts* TrainLexicon::Targets(std::string_view word) const {
  const auto it = word_targets_.find(word);
  return it == word_targets_.end() ? nullptr : &it->second;
}

const TargetCounts* TrainLexicon::Targets(std::string_view word,
                                          std::string_view tag) const {
  const auto it = word_tag_targets_.find(std::pair<std::string, std::string>(word, tag));
  return it == word_tag_targets_.end() ? nullptr : &it->second;
}

std::vector<std::string> TrainLexicon::TagsOf(std::string_view word) const {
  std::vector<std::string> tags;
  const std::pair<std::string, std::string> first(word, "");
  for (auto it = word_tag_targets_.lower_bound(first);
       it != word_tag_targets_.end() && it->first.first == word; ++it)
    tags.push_back(it->first.second);
  return tags;
}

bool TrainLexicon::HasMorpheme(std::string_view morpheme) const {
  return morphemes_.contains(morpheme);
}

bool TrainLexicon::HasSegmentation(std::string_view target) const {
  return segmentations_.contains(target);
}

std::vector<std::string> TrainLexicon::Morphemes(std::string_view target) const {
  std::vector<std::string> out;
  for (std::string& piece : SplitOn(target, boundary_))
    if (!piece.empty()) out.push_back(std::move(piece));
  return out;
}

std::string_view CategoryName(Category c) {
  switch (c) {
    case Category::kNew: return "New";
    case Category::kUnique: return "Unique";
    case Category::kPosUnambiguous: return "POS-unambiguous";
    case Category::kPosAmbiguous: return "POS-ambiguous";
  }
  return "?";
}

std::string_view SegmentCategoryName(SegmentCategory c) {
  switch (c) {
    case SegmentCategory::kNewMorphemes: return "NewMorphemes";
    case SegmentCategory::kNewCombinations: return "NewCombinations";
    case SegmentCategory::kSeen: return "Seen";
  }
  return "?";
}

Category Categorize(const TrainLexicon& lex, std::string_view word) {
  const TargetCounts* targets = lex.Targets(word);
  if (targets == nullptr) return Category::kNew;
  if (targets->size() == 1) return Category::kUnique;
  for (const std::string& tag : lex.TagsOf(word))
    if (lex.Targets(word, tag)->size() != 1) return Category::kPosAmbiguous;
  return Category::kPosUnambiguous;
}

SegmentCategory CategorizeSegmentation(const TrainLexicon& lex, std::string_view word,
                                       std::string_view gold_target) {
  if (lex.Targets(word) != nullptr) return SegmentCategory::kSeen;
  for (const std::string& m : lex.Morphemes(gold_target))
    if (!lex.HasMorpheme(m)) return SegmentCategory::kNewMorphemes;
  return SegmentCategory::kNewCombinations;
}

std::string SeededChoice(std::span<const std::string> tied, std::uint64_t seed,
                         std::string_view word, std::string_view tag) {
  if (tied.empty()) throw InputError("no candidates to choose from");
  if (tied.size() == 1) return tied.front();
  const std::uint64_t w = nn::Fnv1a(word);
  const std::uint64_t t = nn::Fnv1a(tag);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(w >> 32),
                    static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
  return tied[pick(rng)];
}

std::vector<std::string> MostFrequent(const TargetCounts& counts) {
  std::size_t best = 0;
  for (const auto& [target, n] : counts) best = std::max(best, n);
  std::vector<std::string> out;
  for (const auto& [target, n] : counts)
    if (n == best) out.push_back(target);
  return out;
}

std::string BaselinePredict(const TrainLexicon& lex, std::string_view word,
                            std::optional<std::string_view> tag, std::uint64_t seed) {
  const TargetCounts* targets = lex.Targets(word);
  if (targets == nullptr) return std::string(word);
  if (targets->size() == 1) return targets->begin()->first;
  // POS-unambiguous pairs have one target, so both Ambiguous subclasses
  // reduce to: most frequent target of (word, tag) if that pair was seen,
  // else most frequent target of the word.
  const TargetCounts* pair = tag ? lex.Targets(word, *tag) : nullptr;
  if (pair != nullptr) return SeededChoice(MostFrequent(*pair), seed, word, *tag);
  return SeededChoice(MostFrequent(*targets), seed, word, tag.value_or(""));
}

namespace {

std::string AsciiLower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

double WordAccuracy(std::span<const std::string> predictions,
                    std::span<const std::string> golds, bool ignore_case) {
  if (predictions.size() != golds.size())
    throw InputError("prediction count " + std::to_string(predictions.size()) +
                     " != gold count " + std::to_string(golds.size()));
  if (golds.empty()) throw InputError("word accuracy of an empty list");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    const bool hit = ignore_case ? AsciiLower(predictions[i]) == AsciiLower(golds[i])
                                 : predictions[i] == golds[i];
    if (hit) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(golds.size());
}

}  // namespace mlnorm
