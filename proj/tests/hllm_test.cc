// hllm_test.cc
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

#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "mlnorm/errors.h"
#include "mlnorm/ngram.h"

namespace mlnorm::lm {
namespace {

using Corpus = std::vector<std::vector<std::string>>;
using Strings = std::vector<std::string>;

Corpus Repeat(const Strings& sentence, std::size_t n) { return Corpus(n, sentence); }

Corpus RandomCorpus(std::mt19937_64& rng, std::size_t sentences) {
  const Strings alphabet = {"A", "B", "C", "D", "E", "F"};
  std::uniform_int_distribution<std::size_t> len(1, 5), pick(0, alphabet.size() - 1);
  Corpus c;
  for (std::size_t i = 0; i < sentences; ++i) {
    Strings s;
    for (std::size_t n = len(rng); n > 0; --n) s.push_back(alphabet[pick(rng)]);
    c.push_back(s);
  }
  return c;
}

double TotalMass(const NgramModel& m, const Strings& history) {
  double total = 0.0;
  for (const std::string& t : m.PredictableTokens()) total += std::exp(m.LogProb(history, t));
  return total;
}

TEST_CASE("raw count ratio") {
  const NgramModel m = NgramModel::Train({{"A", "B"}, {"A", "C"}}, {.order = 2});
  CHECK(m.MleProb(Strings{"A"}, "B") == 0.5);
  CHECK(m.MleProb(Strings{"A"}, "C") == 0.5);
  CHECK(m.MleProb(Strings{"B"}, "A") == 0.0);
  CHECK(m.Count(Strings{"A", "B"}) == 1.0);
  CHECK(m.Count(Strings{"A"}) == 2.0);
}

TEST_CASE("a repeated single segment dominates") {
  for (Smoothing s : {Smoothing::kWittenBell, Smoothing::kKneserNey}) {
    const NgramModel m = NgramModel::Train(Repeat({"A"}, 10), {.order = 3, .smoothing = s});
    const double start_a = m.ScoreSegment({}, "A");
    for (const std::string& t : m.PredictableTokens())
      if (t != "A") CHECK(m.ScoreSegment({}, t) < start_a);
    const Strings hist = {"A"};
    const double end = m.ScoreEnd(hist);
    for (const std::string& t : m.PredictableTokens())
      if (t != std::string(kSentenceEnd)) CHECK(m.ScoreSegment(hist, t) < end);
    const double unseen = m.ScoreSegment(hist, "Z");
    CHECK(std::isfinite(unseen));
    CHECK(std::exp(unseen) > 0.0);
  }
}

TEST_CASE("more frequent continuations score higher") {
  Corpus c = Repeat({"A", "B"}, 3);
  c.push_back({"A", "C"});
  const NgramModel m = NgramModel::Train(c);
  const Strings hist = {"A"};
  CHECK(m.ScoreSegment(hist, "B") > m.ScoreSegment(hist, "C"));
}

TEST_CASE("conditional distributions are normalized and positive") {
  std::mt19937_64 rng(1);
  for (Smoothing s : {Smoothing::kWittenBell, Smoothing::kKneserNey}) {
    for (int order : {1, 2, 3}) {
      const NgramModel m =
          NgramModel::Train(RandomCorpus(rng, 30), {.order = order, .smoothing = s});
      Strings vocab = m.PredictableTokens();
      vocab.push_back("unseen");
      std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1), len(0, 3);
      for (int trial = 0; trial < 100; ++trial) {
        Strings h;
        if (trial % 2 == 0) h.push_back(std::string(kSentenceStart));
        for (std::size_t n = len(rng); n > 0; --n) h.push_back(vocab[pick(rng)]);
        CHECK(TotalMass(m, h) == doctest::Approx(1.0).epsilon(1e-9));
        for (const std::string& t : m.PredictableTokens()) CHECK(std::isfinite(m.LogProb(h, t)));
      }
    }
  }
}

TEST_CASE("empty history scores are finite") {
  const NgramModel m = NgramModel::Train({{"A", "B"}});
  CHECK(std::isfinite(m.ScoreSegment({}, "A")));
  CHECK(std::isfinite(m.ScoreSegment({}, "B")));
  CHECK(std::isfinite(m.ScoreEnd({})));
  CHECK(std::isfinite(m.ScoreSentence(Strings{"B", "B", "Q"})));
}

TEST_CASE("unseen segments score as unk") {
  const NgramModel m = NgramModel::Train({{"A", "B"}, {"C"}});
  const Strings h = {"A"};
  CHECK(m.ScoreSegment(h, "never") == m.ScoreSegment(h, std::string(kUnknown)));
  CHECK_FALSE(m.Contains("never"));
  CHECK(m.Contains("A"));
}

TEST_CASE("extra occurrences never lower a conditional probability") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, 5);
  const Strings alphabet = {"A", "B", "C", "D", "E", "F"};
  for (int order : {2, 3}) {
    for (int trial = 0; trial < 100; ++trial) {
      Corpus c = RandomCorpus(rng, 15);
      const Strings extra = {alphabet[pick(rng)], alphabet[pick(rng)]};
      const NgramModel before = NgramModel::Train(c, {.order = order});
      c.push_back(extra);
      const NgramModel after = NgramModel::Train(c, {.order = order});
      CHECK(after.ScoreSegment(Strings{extra[0]}, extra[1]) >=
            before.ScoreSegment(Strings{extra[0]}, extra[1]));
      CHECK(after.ScoreSegment({}, extra[0]) >= before.ScoreSegment({}, extra[0]));
    }
  }
}

TEST_CASE("save and load reproduce every score bit for bit") {
  std::mt19937_64 rng(3);
  for (Smoothing s : {Smoothing::kWittenBell, Smoothing::kKneserNey}) {
    const NgramModel m = NgramModel::Train(RandomCorpus(rng, 40),
                                           {.order = 3, .smoothing = s, .unk_singletons = true});
    std::stringstream buf;
    m.Save(buf);
    const NgramModel r = NgramModel::Load(buf);
    CHECK(r.order() == 3);
    CHECK(r.options().smoothing == s);
    const Strings toks = m.PredictableTokens();
    for (const std::string& a : toks)
      for (const std::string& b : toks)
        for (const std::string& c : toks) {
          const Strings h = {a, b};
          CHECK(r.LogProb(h, c) == m.LogProb(h, c));
        }
  }
}

TEST_CASE("ARPA dump agrees with the model under standard back-off") {
  std::mt19937_64 rng(5);
  const NgramModel m = NgramModel::Train(RandomCorpus(rng, 25), {.order = 2});
  std::stringstream arpa;
  m.WriteArpa(arpa);
  std::map<std::string, double> uni, bow;
  std::map<std::pair<std::string, std::string>, double> bi;
  std::string line;
  int section = 0;
  while (std::getline(arpa, line)) {
    if (line == "\\1-grams:") section = 1;
    else if (line == "\\2-grams:") section = 2;
    else if (line.empty() || line[0] == '\\' || line.rfind("ngram", 0) == 0) continue;
    else {
      std::istringstream f(line);
      double lp;
      std::string a, b;
      f >> lp >> a;
      if (section == 1) {
        uni[a] = lp;
        double w;
        if (f >> w) bow[a] = w;
      } else {
        f >> b;
        bi[{a, b}] = lp;
      }
    }
  }
  CHECK(arpa.str().rfind("\\data\\\nngram 1=", 0) == 0);
  for (const auto& [h, unused] : uni) {
    if (h == std::string(kSentenceEnd)) continue;
    for (const std::string& w : m.PredictableTokens()) {
      const auto hit = bi.find({h, w});
      const double expect = hit != bi.end() ? hit->second
                                            : (bow.count(h) ? bow[h] : 0.0) + uni[w];
      CHECK(m.LogProb(Strings{h}, w) / std::log(10.0) == doctest::Approx(expect).epsilon(2e-6));
    }
  }
}

TEST_CASE("invalid training requests") {
  CHECK_THROWS_AS(NgramModel::Train({{"A"}}, {.order = 0}), ConfigError);
  CHECK_THROWS_AS(NgramModel::Train({}), InputError);
  CHECK_THROWS_AS(ParseSmoothing("good-turing"), ConfigError);
  CHECK(ParseSmoothing(SmoothingName(Smoothing::kKneserNey)) == Smoothing::kKneserNey);
}

}  // namespace
}  // namespace mlnorm::lm
