// vocabulary.h
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

#ifndef MLNORM_VOCABULARY_H_
#define MLNORM_VOCABULARY_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mlnorm {

// Dense symbol <-> index map. Reserved symbols occupy the first indices;
// the rest are ordered by descending frequency, ties lexicographic.
class Vocabulary {
 public:
  Vocabulary() = default;

  static Vocabulary Build(const std::vector<std::string>& reserved,
                          const std::map<std::string, std::size_t>& counts,
                          std::string_view unk);
  // Restores a vocabulary from its symbol listing.
  static Vocabulary FromSymbols(std::vector<std::string> symbols,
                                std::size_t num_reserved, std::string_view unk);

  // Index of `symbol`, or the UNK index if unseen.
  int Index(std::string_view symbol) const;
  std::optional<int> Find(std::string_view symbol) const;
  bool Contains(std::string_view symbol) const { return Find(symbol).has_value(); }
  const std::string& Symbol(int index) const;

  std::size_t size() const { return symbols_.size(); }
  std::size_t num_reserved() const { return num_reserved_; }
  int unk() const { return unk_; }
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::uint64_t Hash() const;

  bool operator==(const Vocabulary& other) const {
    return symbols_ == other.symbols_ && num_reserved_ == other.num_reserved_ &&
           unk_ == other.unk_;
  }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> index_;
  std::size_t num_reserved_ = 0;
  int unk_ = -1;
};

// Character vocabularies always start with these four symbols.
inline constexpr int kBos = 0;
inline constexpr int kEos = 1;
inline constexpr int kUnk = 2;
inline constexpr int kSeg = 3;
inline constexpr std::string_view kBosSymbol = "<bos>";
inline constexpr std::string_view kEosSymbol = "<eos>";
inline constexpr std::string_view kUnkSymbol = "<unk>";
inline constexpr std::string_view kSegSymbol = "<seg>";

Vocabulary BuildCharVocabulary(const std::map<std::string, std::size_t>& counts);
// Tag vocabularies reserve only an UNK-tag row at index 0.
Vocabulary BuildTagVocabulary(const std::map<std::string, std::size_t>& counts);

// Maps each character of `word` to its index (unseen -> UNK).
std::vector<int> EncodeSource(const Vocabulary& vocab, std::string_view word);
// As EncodeSource, but every occurrence of `boundary` becomes SEG. Does not
// append EOS.
std::vector<int> EncodeTarget(const Vocabulary& vocab, std::string_view text,
                              std::string_view boundary);
// Inverse of EncodeTarget; stops at the first EOS.
std::string DecodeTarget(const Vocabulary& vocab, const std::vector<int>& ids,
                         std::string_view boundary);

}  // namespace mlnorm

#endif  // MLNORM_VOCABULARY_H_
