// ngram.h
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

#ifndef MLNORM_NGRAM_H_
#define MLNORM_NGRAM_H_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mlnorm::lm {

inline constexpr std::string_view kSentenceStart = "<s>";
inline constexpr std::string_view kSentenceEnd = "</s>";
inline constexpr std::string_view kUnknown = "<unk>";

enum class Smoothing { kWittenBell, kKneserNey };

std::string_view SmoothingName(Smoothing s);
Smoothing ParseSmoothing(std::string_view name);

struct NgramOptions {
  int order = 3;
  Smoothing smoothing = Smoothing::kWittenBell;
  // Replace segments seen once with <unk> before counting.
  bool unk_singletons = false;
  // Absolute discount for Kneser-Ney.
  double discount = 0.75;
};

// Interpolated n-gram model over segments (morphemes or words). Every
// sentence is padded as <s> s_1 ... s_n </s>. Predictable events are the
// training segments plus <unk> and </s>; for any history their
// probabilities sum to one and each is strictly positive.
//
// Witten-Bell:
//   P(w|h) = (c(h,w) + N1+(h.) P(w|h')) / (c(h) + N1+(h.))
// Kneser-Ney (lower orders use continuation counts except after <s>):
//   P(w|h) = max(c(h,w) - D, 0) / c(h) + D N1+(h.) / c(h) P(w|h')
// with P(w|empty) interpolated against the uniform distribution. Histories
// never seen fall through to the next shorter one.
class NgramModel {
 public:
  NgramModel() = default;

  static NgramModel Train(const std::vector<std::vector<std::string>>& corpus,
                          const NgramOptions& options = {});

  // Natural-log probability of `next` after `context` (may start with
  // "<s>"); only the last order-1 tokens matter. Unseen segments score as
  // <unk>.
  double LogProb(std::span<const std::string> context, std::string_view next) const;
  // Sentence-level scoring: `history` holds the segments emitted so far and
  // is implicitly preceded by <s>.
  double ScoreSegment(std::span<const std::string> history, std::string_view next) const;
  double ScoreEnd(std::span<const std::string> history) const;
  // log P of a whole segment sequence including </s>.
  double ScoreSentence(std::span<const std::string> segments) const;

  // Training count of a token sequence (context tokens then the final
  // token); 0 when unseen or longer than the order.
  double Count(std::span<const std::string> ngram) const;
  // Unsmoothed count ratio c(context, next) / sum_w c(context, w); 0 for
  // an unseen context.
  double MleProb(std::span<const std::string> context, std::string_view next) const;

  int order() const { return options_.order; }
  const NgramOptions& options() const { return options_; }
  // Tokens with a probability under any history: </s>, <unk> and the
  // training segments.
  std::vector<std::string> PredictableTokens() const;
  bool Contains(std::string_view token) const;

  void Save(std::ostream& out) const;
  static NgramModel Load(std::istream& in);
  void SaveFile(const std::string& path) const;
  static NgramModel LoadFile(const std::string& path);

  // ARPA-style listing with log10 probabilities and back-off weights.
  void WriteArpa(std::ostream& out) const;

 private:
  using Ngram = std::vector<int>;
  struct HistoryStats {
    std::map<int, double> next;
    double total = 0.0;
    double distinct = 0.0;
  };

  void Finalize();
  int Id(std::string_view token) const;
  double Prob(std::span<const int> history, int next) const;
  // Weight given to the shorter history, or 1 when the history is unseen.
  double BackoffWeight(std::span<const int> history) const;
  std::vector<int> ContextIds(std::span<const std::string> context) const;

  NgramOptions options_;
  std::vector<std::string> tokens_;  // id -> token; 0 <s>, 1 </s>, 2 <unk>
  std::unordered_map<std::string, int> ids_;
  // raw_[k][ngram]: count of (k+1)-grams in the padded corpus.
  std::vector<std::map<Ngram, double>> raw_;
  // stats_[k][history]: effective counts of events after a k-token history.
  std::vector<std::map<Ngram, HistoryStats>> stats_;
};

}  // namespace mlnorm::lm

#endif  // MLNORM_NGRAM_H_
