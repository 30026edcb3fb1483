// lexicon.h
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

#ifndef MLNORM_LEXICON_H_
#define MLNORM_LEXICON_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mlnorm {

// One aligned (word, tag label, target) occurrence. The tag label is the
// '+'-joined composite tag, empty when the corpus has none.
struct LexiconEntry {
  std::string word;
  std::string tag;
  std::string target;
};

using TargetCounts = std::map<std::string, std::size_t>;

class TrainLexicon {
 public:
  TrainLexicon() = default;
  // `boundary` splits segmentation targets into morphemes.
  static TrainLexicon Build(std::span<const LexiconEntry> train,
                            std::string_view boundary = "|");

  const TargetCounts* Targets(std::string_view word) const;
  const TargetCounts* Targets(std::string_view word, std::string_view tag) const;
  // Tags observed with `word`, in sorted order.
  std::vector<std::string> TagsOf(std::string_view word) const;
  bool HasMorpheme(std::string_view morpheme) const;
  bool HasSegmentation(std::string_view target) const;
  std::vector<std::string> Morphemes(std::string_view target) const;

  const std::map<std::string, TargetCounts, std::less<>>& word_targets() const {
    return word_targets_;
  }
  const std::set<std::string, std::less<>>& morpheme_inventory() const {
    return morphemes_;
  }
  const std::string& boundary() const { return boundary_; }
  std::size_t occurrences() const { return occurrences_; }

 private:
  std::map<std::string, TargetCounts, std::less<>> word_targets_;
  std::map<std::pair<std::string, std::string>, TargetCounts, std::less<>>
      word_tag_targets_;
  std::set<std::string, std::less<>> morphemes_;
  std::set<std::string, std::less<>> segmentations_;
  std::string boundary_ = "|";
  std::size_t occurrences_ = 0;
};

enum class Category {
  kNew,
  kUnique,
  kPosUnambiguous,  // ambiguous word, every tag picks one target
  kPosAmbiguous,    // ambiguous word otherwise
};

enum class SegmentCategory { kNewMorphemes, kNewCombinations, kSeen };

std::string_view CategoryName(Category c);
std::string_view SegmentCategoryName(SegmentCategory c);
inline bool IsAmbiguous(Category c) {
  return c == Category::kPosUnambiguous || c == Category::kPosAmbiguous;
}

Category Categorize(const TrainLexicon& lex, std::string_view word);
// Unseen words split by whether every gold morpheme is in the inventory.
SegmentCategory CategorizeSegmentation(const TrainLexicon& lex, std::string_view word,
                                       std::string_view gold_target);

// Uniform choice among tied candidates (given in sorted order). The draw
// depends on the seed and the query only, not on call order.
std::string SeededChoice(std::span<const std::string> tied, std::uint64_t seed,
                         std::string_view word, std::string_view tag);

// Candidates sharing the maximum count, in sorted order.
std::vector<std::string> MostFrequent(const TargetCounts& counts);

std::string BaselinePredict(const TrainLexicon& lex, std::string_view word,
                            std::optional<std::string_view> tag, std::uint64_t seed);

// Exact-match rate; throws InputError on a length mismatch or empty input.
double WordAccuracy(std::span<const std::string> predictions,
                    std::span<const std::string> golds, bool ignore_case = false);

}  // namespace mlnorm

#endif  // MLNORM_LEXICON_H_
