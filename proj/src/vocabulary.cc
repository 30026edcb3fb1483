// vocabulary.cc
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

#include "mlnorm/vocabulary.h"

#include <algorithm>

#include "mlnorm/errors.h"
#include "mlnorm/nn/tensor.h"
#include "mlnorm/utf8.h"

namespace mlnorm {

Vocabulary Vocabulary::Build(const std::vector<std::string>& reserved,
                             const std::map<std::string, std::size_t>& counts,
                             std::string_view unk) {
  std::vector<std::pair<std::string, std::size_t>> entries;
  for (const auto& [sym, n] : counts)
    if (std::find(reserved.begin(), reserved.end(), sym) == reserved.end())
      entries.emplace_back(sym, n);
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> symbols = reserved;
  for (auto& e : entries) symbols.push_back(std::move(e.first));
  return FromSymbols(std::move(symbols), reserved.size(), unk);
}

Vocabulary Vocabulary::FromSymbols(std::vector<std::string> symbols,
                                   std::size_t num_reserved,
                                   std::string_view unk) {
  Vocabulary v;
  v.symbols_ = std::move(symbols);
  v.num_reserved_ = num_reserved;
  for (std::size_t i = 0; i < v.symbols_.size(); ++i) {
    if (!v.index_.emplace(v.symbols_[i], static_cast<int>(i)).second)
      throw InputError("duplicate vocabulary symbol '" + v.symbols_[i] + "'");
  }
  const auto it = v.index_.find(std::string(unk));
  if (it == v.index_.end())
    throw InputError("vocabulary lacks its UNK symbol");
  v.unk_ = it->second;
  return v;
}

std::optional<int> Vocabulary::Find(std::string_view symbol) const {
  const auto it = index_.find(std::string(symbol));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Vocabulary::Index(std::string_view symbol) const {
  return Find(symbol).value_or(unk_);
}

const std::string& Vocabulary::Symbol(int index) const {
  if (index < 0 || static_cast<std::size_t>(index) >= symbols_.size())
    throw InputError("vocabulary index out of range");
  return symbols_[index];
}

std::uint64_t Vocabulary::Hash() const {
  std::uint64_t h = nn::Fnv1a(std::to_string(num_reserved_));
  for (const std::string& s : symbols_) {
    h = nn::Fnv1a(s, h);
    h = nn::Fnv1a(std::string_view("\0", 1), h);
  }
  return h;
}

Vocabulary BuildCharVocabulary(const std::map<std::string, std::size_t>& counts) {
  return Vocabulary::Build({std::string(kBosSymbol), std::string(kEosSymbol),
                            std::string(kUnkSymbol), std::string(kSegSymbol)},
                           counts, kUnkSymbol);
}

Vocabulary BuildTagVocabulary(const std::map<std::string, std::size_t>& counts) {
  return Vocabulary::Build({std::string(kUnkSymbol)}, counts, kUnkSymbol);
}

std::vector<int> EncodeSource(const Vocabulary& vocab, std::string_view word) {
  std::vector<int> ids;
  for (const std::string& ch : SplitChars(word)) ids.push_back(vocab.Index(ch));
  return ids;
}

std::vector<int> EncodeTarget(const Vocabulary& vocab, std::string_view text,
                              std::string_view boundary) {
  std::vector<int> ids;
  for (const std::string& ch : SplitChars(text))
    ids.push_back(ch == boundary ? kSeg : vocab.Index(ch));
  return ids;
}

std::string DecodeTarget(const Vocabulary& vocab, const std::vector<int>& ids,
                         std::string_view boundary) {
  std::string out;
  for (int id : ids) {
    if (id == kEos) break;
    if (id == kSeg) out += boundary;
    else out += vocab.Symbol(id);
  }
  return out;
}

}  // namespace mlnorm
