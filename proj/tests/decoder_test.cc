// decoder_test.cc
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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "mlnorm/beam.h"
#include "mlnorm/errors.h"
#include "mlnorm/ngram.h"
#include "mlnorm/tune.h"
#include "mlnorm/vocabulary.h"
#include "testing.h"

namespace mlnorm {
namespace {

using testing::RandomTableScorer;
using testing::TableScorer;
using Strings = std::vector<std::string>;
using Symbols = std::vector<int>;

// Every symbol sequence of at most `max_len` non-EOS symbols.
void Enumerate(std::size_t vocab_size, std::size_t max_len, Symbols& prefix,
               const std::function<void(const Symbols&)>& visit) {
  visit(prefix);
  if (prefix.size() == max_len) return;
  for (int s = 0; s < static_cast<int>(vocab_size); ++s) {
    if (s == kBos || s == kEos) continue;
    prefix.push_back(s);
    Enumerate(vocab_size, max_len, prefix, visit);
    prefix.pop_back();
  }
}

Strings Segments(const Symbols& s, const Vocabulary& vocab) {
  Strings out(1);
  for (int x : s) {
    if (x == kSeg) out.emplace_back();
    else out.back() += vocab.Symbol(x);
  }
  Strings kept;
  for (auto& seg : out)
    if (!seg.empty()) kept.push_back(seg);
  return kept;
}

double LmScore(const lm::NgramModel& lm, const Strings& segs) {
  double total = 0.0;
  Strings history;
  for (const std::string& seg : segs) {
    total += lm.ScoreSegment(history, seg);
    history.push_back(seg);
  }
  return total + lm.ScoreEnd(history);
}

// Two-character distributions favouring "q|z", with the LM taught "q|y".
struct FlipCase {
  Vocabulary vocab = BuildCharVocabulary(testing::CharCounts("qyz"));
  int q = vocab.Index("q"), y = vocab.Index("y"), z = vocab.Index("z");
  TableScorer scorer{vocab.size(), [this](const Symbols& prefix) {
                       std::vector<double> p(vocab.size(), 0.01);
                       p[kBos] = 0.0;
                       if (prefix.empty()) p[static_cast<std::size_t>(q)] = 1.0;
                       else if (prefix.size() == 1) p[kSeg] = 1.0;
                       else if (prefix.size() == 2) {
                         p[static_cast<std::size_t>(z)] = 0.55;
                         p[static_cast<std::size_t>(y)] = 0.40;
                       } else p[kEos] = 1.0;
                       double t = 0.0;
                       for (double v : p) t += v;
                       for (double& v : p) v /= t;
                       return p;
                     }};
  lm::NgramModel lm = lm::NgramModel::Train(std::vector<Strings>(5, Strings{"q", "y"}));
  std::string Spell(const DecodeResult& r) const { return DecodeTarget(vocab, r.symbols, "|"); }
};

TEST_CASE("beam of size one is the greedy chain") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const TableScorer s = RandomTableScorer(6, seed);
    const DecodeResult g = GreedyDecode(s, 6);
    const DecodeResult b = BeamDecode(s, {1, 6});
    CHECK(g.symbols == b.symbols);
    CHECK(g.score == b.score);
  }
}

TEST_CASE("reported scores equal the sequence log-probability") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const TableScorer s = RandomTableScorer(7, seed);
    const DecodeResult g = GreedyDecode(s, 8);
    if (!g.truncated)
      CHECK(SequenceLogProb(s, g.symbols) == doctest::Approx(g.score).epsilon(1e-12));
    for (std::size_t k : {2u, 3u, 5u}) {
      const DecodeResult b = BeamDecode(s, {k, 8});
      if (b.truncated) continue;
      CHECK(SequenceLogProb(s, b.symbols) == doctest::Approx(b.score).epsilon(1e-12));
    }
  }
}

TEST_CASE("a pruned greedy path can leave the beam below greedy") {
  // Symbols: 1 EOS, 2 UNK, 3 SEG, 4 'a'. Greedy takes "a" then EOS for
  // 0.4 * 0.26; both extensions of UNK outrank that at step two and then
  // decay to at most 0.35 * 0.5 * 0.3.
  const TableScorer s(5, [](const Symbols& prefix) -> std::vector<double> {
    if (prefix.empty()) return {0.0, 0.0, 0.35, 0.25, 0.4};
    if (prefix.size() == 1) {
      if (prefix[0] == 4) return {0.0, 0.26, 0.25, 0.25, 0.24};
      if (prefix[0] == 2) return {0.0, 0.0, 0.0, 0.5, 0.5};
      return {0.0, 0.25, 0.25, 0.25, 0.25};
    }
    if (prefix.size() == 2) return {0.0, 0.1, 0.3, 0.3, 0.3};
    return {0.0, 1.0, 0.0, 0.0, 0.0};
  });
  const DecodeResult g = GreedyDecode(s, 6);
  CHECK(g.symbols == Symbols{4});
  CHECK(g.score == doctest::Approx(std::log(0.4 * 0.26)));
  const DecodeResult b = BeamDecode(s, {2, 6});
  CHECK(b.score < g.score);
  CHECK(b.score == doctest::Approx(std::log(0.35 * 0.5 * 0.3)));
  // Wide enough to keep the greedy path, the beam recovers it.
  CHECK(BeamDecode(s, {16, 6}).symbols == Symbols{4});
}

TEST_CASE("wide beam finds the exhaustive argmax") {
  const std::size_t V = 5, L = 4;  // BOS + four emittable symbols
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const TableScorer s = RandomTableScorer(V, 1000 + seed);
    double best = -std::numeric_limits<double>::infinity();
    Symbols best_seq, prefix;
    Enumerate(V, L, prefix, [&](const Symbols& seq) {
      const double lp = SequenceLogProb(s, seq);
      if (lp > best) {
        best = lp;
        best_seq = seq;
      }
    });
    const DecodeResult r = BeamDecode(s, {256, L});
    CHECK(r.symbols == best_seq);
    CHECK(r.score == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("wide two-level beam finds the exhaustive fused argmax") {
  const Vocabulary vocab = BuildCharVocabulary(testing::CharCounts("ab"));
  const std::size_t L = 4;
  const lm::NgramModel lm =
      lm::NgramModel::Train({{"a", "b"}, {"ab"}, {"b", "b", "a"}, {"a"}}, {.order = 2});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const TableScorer s = RandomTableScorer(vocab.size(), 2000 + seed);
    for (const FusionWeights w : {FusionWeights{1.0, 0.5}, FusionWeights{1.0, 2.0}}) {
      double best = -std::numeric_limits<double>::infinity();
      Symbols best_seq, prefix;
      Enumerate(vocab.size(), L, prefix, [&](const Symbols& seq) {
        const double v = w.nmt * SequenceLogProb(s, seq) + w.lm * LmScore(lm, Segments(seq, vocab));
        if (v > best) {
          best = v;
          best_seq = seq;
        }
      });
      const DecodeResult r = TwoLevelBeam(s, lm, vocab, w, {2000, L});
      CHECK(r.symbols == best_seq);
      CHECK(r.score == doctest::Approx(best).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero LM weight reduces to the plain beam") {
  const Vocabulary vocab = BuildCharVocabulary(testing::CharCounts("abc"));
  const lm::NgramModel lm = lm::NgramModel::Train({{"a", "bc"}, {"cab"}});
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const TableScorer s = RandomTableScorer(vocab.size(), 3000 + seed);
    const DecodeResult a = BeamDecode(s, {3, 10});
    const DecodeResult b = TwoLevelBeam(s, lm, vocab, {1.0, 0.0}, {3, 10});
    CHECK(a.symbols == b.symbols);
    CHECK(a.nmt_log_prob == b.nmt_log_prob);
  }
}

TEST_CASE("hypotheses stay consistent after every expansion") {
  const Vocabulary vocab = BuildCharVocabulary(testing::CharCounts("ab"));
  const lm::NgramModel lm = lm::NgramModel::Train({{"a", "b"}, {"ba"}}, {.order = 3});
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const TableScorer s = RandomTableScorer(vocab.size(), 4000 + seed);
    TwoLevelBeam(s, lm, vocab, {1.0, 0.7}, {4, 8}, [&](std::span<const Hypothesis> beam) {
      for (const Hypothesis& h : beam) {
        CHECK(HypothesisConsistent(h, vocab));
        double expect = 0.0;
        Strings hist;
        for (const std::string& seg : h.segment_history) {
          expect += lm.ScoreSegment(hist, seg);
          hist.push_back(seg);
        }
        if (h.closed) expect += lm.ScoreEnd(hist);
        CHECK(h.lm_log_prob == doctest::Approx(expect).epsilon(1e-12));
        ++checked;
      }
    });
  }
  CHECK(checked > 100);
}

TEST_CASE("consistency check rejects a mismatched decomposition") {
  const Vocabulary vocab = BuildCharVocabulary(testing::CharCounts("ab"));
  Hypothesis h;
  h.symbols = {vocab.Index("a"), kSeg, vocab.Index("b")};
  h.segment_history = {"a"};
  h.open_segment = "b";
  CHECK(HypothesisConsistent(h, vocab));
  h.open_segment = "a";
  CHECK_FALSE(HypothesisConsistent(h, vocab));
}

TEST_CASE("search that never closes returns a truncated hypothesis") {
  const TableScorer never(5, [](const Symbols&) {
    return std::vector<double>{0.0, 1e-300, 0.2, 0.3, 0.5};
  });
  const DecodeResult g = GreedyDecode(never, 4);
  CHECK(g.truncated);
  CHECK(g.symbols == Symbols{4, 4, 4, 4});
  const DecodeResult b = BeamDecode(never, {1, 4});
  CHECK(b.truncated);
  CHECK(b.symbols.size() == 4);
  CHECK_FALSE(BeamDecode(RandomTableScorer(5, 1), {3, 20}).truncated);
}

TEST_CASE("decoding is deterministic") {
  const Vocabulary vocab = BuildCharVocabulary(testing::CharCounts("ab"));
  const lm::NgramModel lm = lm::NgramModel::Train({{"a", "b"}});
  const TableScorer s = RandomTableScorer(vocab.size(), 77);
  const DecodeResult a = TwoLevelBeam(s, lm, vocab, {1.0, 0.8}, {3, 10});
  const DecodeResult b = TwoLevelBeam(s, lm, vocab, {1.0, 0.8}, {3, 10});
  CHECK(a.symbols == b.symbols);
  CHECK(a.score == b.score);
}

TEST_CASE("an LM trained on the gold sequence keeps a correct plain decode") {
  const Vocabulary vocab = BuildCharVocabulary(testing::CharCounts("ab"));
  std::mt19937_64 rng(9);
  std::size_t plain_right = 0, fused_right = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const TableScorer s = RandomTableScorer(vocab.size(), 5000 + seed);
    Symbols gold = BeamDecode(s, {3, 6}).symbols;
    if (seed % 2 == 1) gold = {vocab.Index("a"), kSeg, vocab.Index("b")};
    const Strings segs = Segments(gold, vocab);
    if (segs.empty() || std::count(gold.begin(), gold.end(), kUnk) > 0) continue;
    const lm::NgramModel lm = lm::NgramModel::Train(std::vector<Strings>(20, segs));
    const bool plain = BeamDecode(s, {3, 6}).symbols == gold;
    const bool fused = TwoLevelBeam(s, lm, vocab, {1.0, 1.0}, {3, 6}).symbols == gold;
    if (plain) CHECK(fused);
    plain_right += plain;
    fused_right += fused;
  }
  CHECK(fused_right >= plain_right);
}

TEST_CASE("a strong enough LM flips the segment choice") {
  FlipCase fc;
  CHECK(fc.Spell(BeamDecode(fc.scorer, {3, 6})) == "q|z");
  CHECK(fc.Spell(TwoLevelBeam(fc.scorer, fc.lm, fc.vocab, {1.0, 0.0}, {3, 6})) == "q|z");
  double flip = -1.0;
  for (double lambda = 0.0; lambda <= 2.0 + 1e-9; lambda += 0.05) {
    if (fc.Spell(TwoLevelBeam(fc.scorer, fc.lm, fc.vocab, {1.0, lambda}, {3, 6})) == "q|y") {
      flip = lambda;
      break;
    }
  }
  CHECK(flip > 0.0);
}

TEST_CASE("tuning") {
  FlipCase fc;
  SUBCASE("selects a positive LM weight when the LM choice is gold") {
    const std::vector<TuneItem> dev = {{&fc.scorer, "q|y", 6}};
    const TuneResult r = TuneWeights(dev, fc.lm, fc.vocab, "|", 3);
    CHECK(r.weights.lm > 0.0);
    CHECK(r.weights.nmt == 1.0);
    CHECK(r.accuracy == 1.0);
    CHECK(r.trace.front().lambda_lm == 0.0);
    CHECK(r.trace.front().accuracy == 0.0);
  }
  SUBCASE("keeps lambda 0 when that is already optimal") {
    const std::vector<TuneItem> dev = {{&fc.scorer, "q|z", 6}};
    const TuneResult r = TuneWeights(dev, fc.lm, fc.vocab, "|", 3);
    CHECK(r.weights.lm == 0.0);
    CHECK(r.accuracy == 1.0);
    CHECK(r.accuracy == FusionAccuracy(dev, fc.lm, fc.vocab, "|", 3, {1.0, 0.0}));
  }
  SUBCASE("never does worse than lambda 0") {
    const std::vector<TuneItem> dev = {{&fc.scorer, "q|y", 6}, {&fc.scorer, "q|z", 6}};
    const TuneResult r = TuneWeights(dev, fc.lm, fc.vocab, "|", 3);
    CHECK(r.accuracy >= FusionAccuracy(dev, fc.lm, fc.vocab, "|", 3, {1.0, 0.0}));
  }
  SUBCASE("rejects an empty dev set") {
    CHECK_THROWS_AS(TuneWeights({}, fc.lm, fc.vocab, "|", 3), InputError);
  }
}

TEST_CASE("invalid weights and beam settings") {
  CHECK_THROWS_AS((FusionWeights{0.0, 0.0}).Validate(), ConfigError);
  CHECK_THROWS_AS((FusionWeights{1.0, -0.1}).Validate(), ConfigError);
  CHECK_NOTHROW((FusionWeights{0.0, 1.0}).Validate());
  CHECK_THROWS_AS((BeamConfig{0, 10}).Validate(), ConfigError);
}

}  // namespace
}  // namespace mlnorm
