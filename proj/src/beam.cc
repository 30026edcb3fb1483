// beam.cc
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

#include "mlnorm/beam.h"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "mlnorm/errors.h"

namespace mlnorm {

namespace {

int LastSymbol(const Hypothesis& h) {
  return h.symbols.empty() ? kBos : h.symbols.back();
}

struct Candidate {
  int parent;
  int symbol;  // -1: carried-over closed hypothesis
  double nmt;
  double lm;
  double score;
};

// Shared engine; `lm` null means no segment rescoring.
DecodeResult Search(const CharScorer& scorer, const lm::NgramModel* lm,
                    const Vocabulary* vocab, const FusionWeights& weights,
                    const BeamConfig& cfg, const BeamObserver* observer) {
  cfg.Validate();
  weights.Validate();
  std::vector<Hypothesis> beam(1);
  beam[0].state = scorer.Start();

  for (std::size_t step = 0; step <= cfg.max_length; ++step) {
    if (std::all_of(beam.begin(), beam.end(),
                    [](const Hypothesis& h) { return h.closed; }))
      break;
    std::vector<Candidate> cands;
    std::vector<DecoderState> next_states(beam.size());
    for (std::size_t p = 0; p < beam.size(); ++p) {
      const Hypothesis& h = beam[p];
      if (h.closed) {
        cands.push_back({static_cast<int>(p), -1, h.nmt_log_prob, h.lm_log_prob,
                         h.Score(weights)});
        continue;
      }
      const std::vector<double> dist =
          scorer.Next(h.state, LastSymbol(h), &next_states[p]);
      for (std::size_t s = 0; s < dist.size(); ++s) {
        if (static_cast<int>(s) == kBos || !(dist[s] > 0.0)) continue;
        const double nmt = h.nmt_log_prob + std::log(dist[s]);
        double lm_total = h.lm_log_prob;
        const int sym = static_cast<int>(s);
        if (lm != nullptr && (sym == kSeg || sym == kEos)) {
          if (!h.open_segment.empty())
            lm_total += lm->ScoreSegment(h.segment_history, h.open_segment);
          if (sym == kEos) {
            std::vector<std::string> history = h.segment_history;
            if (!h.open_segment.empty()) history.push_back(h.open_segment);
            lm_total += lm->ScoreEnd(history);
          }
        }
        cands.push_back({static_cast<int>(p), sym, nmt, lm_total,
                         weights.nmt * nmt + weights.lm * lm_total});
      }
    }
    if (cands.empty()) break;

    auto sequence_less = [&](const Candidate& a, const Candidate& b) {
      const auto& sa = beam[a.parent].symbols;
      const auto& sb = beam[b.parent].symbols;
      std::vector<int> x(sa), y(sb);
      if (a.symbol >= 0) x.push_back(a.symbol);
      if (b.symbol >= 0) y.push_back(b.symbol);
      return x < y;
    };
    const std::size_t keep = std::min(cfg.beam_size, cands.size());
    std::partial_sort(cands.begin(), cands.begin() + keep, cands.end(),
                      [&](const Candidate& a, const Candidate& b) {
                        if (a.score != b.score) return a.score > b.score;
                        return sequence_less(a, b);
                      });

    std::vector<Hypothesis> next;
    next.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
      const Candidate& c = cands[i];
      const Hypothesis& parent = beam[c.parent];
      if (c.symbol < 0) {
        next.push_back(parent);
        continue;
      }
      Hypothesis h;
      h.symbols = parent.symbols;
      h.symbols.push_back(c.symbol);
      h.nmt_log_prob = c.nmt;
      h.lm_log_prob = c.lm;
      h.segment_history = parent.segment_history;
      h.open_segment = parent.open_segment;
      h.state = next_states[c.parent];
      if (c.symbol == kSeg || c.symbol == kEos) {
        if (!h.open_segment.empty()) h.segment_history.push_back(h.open_segment);
        h.open_segment.clear();
        h.closed = c.symbol == kEos;
      } else if (vocab != nullptr) {
        h.open_segment += vocab->Symbol(c.symbol);
      }
      next.push_back(std::move(h));
    }
    beam = std::move(next);
#ifndef NDEBUG
    if (vocab != nullptr)
      for (const Hypothesis& h : beam) assert(HypothesisConsistent(h, *vocab));
#endif
    if (observer != nullptr && *observer) (*observer)(beam);
  }

  // The beam is sorted best-first.
  DecodeResult result;
  const Hypothesis* best = nullptr;
  for (const Hypothesis& h : beam)
    if (h.closed) {
      best = &h;
      break;
    }
  if (best == nullptr) {
    best = &beam.front();
    result.truncated = true;
  }
  result.symbols = best->symbols;
  if (!result.symbols.empty() && result.symbols.back() == kEos) result.symbols.pop_back();
  if (result.symbols.size() > cfg.max_length) result.symbols.resize(cfg.max_length);
  result.nmt_log_prob = best->nmt_log_prob;
  result.lm_log_prob = best->lm_log_prob;
  result.score = best->Score(weights);
  return result;
}

}  // namespace

void BeamConfig::Validate() const {
  if (beam_size < 1) throw ConfigError("beam size must be >= 1");
}

std::size_t DefaultMaxLength(std::size_t source_length) {
  return std::max<std::size_t>(20, 3 * source_length);
}

void FusionWeights::Validate() const {
  if (!(nmt >= 0.0) || !(lm >= 0.0)) throw ConfigError("fusion weights must be >= 0");
  if (nmt == 0.0 && lm == 0.0) throw ConfigError("fusion weights are both zero");
}

DecodeResult GreedyDecode(const CharScorer& scorer, std::size_t max_length) {
  DecodeResult result;
  DecoderState state = scorer.Start();
  int prev = kBos;
  for (std::size_t step = 0; step <= max_length; ++step) {
    DecoderState next;
    const std::vector<double> dist = scorer.Next(state, prev, &next);
    int best = -1;
    for (std::size_t s = 0; s < dist.size(); ++s) {
      if (static_cast<int>(s) == kBos) continue;
      if (best < 0 || dist[s] > dist[best]) best = static_cast<int>(s);
    }
    result.nmt_log_prob += std::log(dist[best]);
    if (best == kEos) {
      result.score = result.nmt_log_prob;
      return result;
    }
    result.symbols.push_back(best);
    state = std::move(next);
    prev = best;
  }
  result.truncated = true;
  result.symbols.resize(max_length);
  result.score = result.nmt_log_prob;
  return result;
}

DecodeResult BeamDecode(const CharScorer& scorer, const BeamConfig& cfg) {
  return Search(scorer, nullptr, nullptr, FusionWeights{1.0, 0.0}, cfg, nullptr);
}

DecodeResult TwoLevelBeam(const CharScorer& scorer, const lm::NgramModel& lm,
                          const Vocabulary& vocab, const FusionWeights& weights,
                          const BeamConfig& cfg) {
  return Search(scorer, &lm, &vocab, weights, cfg, nullptr);
}

DecodeResult TwoLevelBeam(const CharScorer& scorer, const lm::NgramModel& lm,
                          const Vocabulary& vocab, const FusionWeights& weights,
                          const BeamConfig& cfg, const BeamObserver& observer) {
  return Search(scorer, &lm, &vocab, weights, cfg, &observer);
}

bool HypothesisConsistent(const Hypothesis& h, const Vocabulary& vocab) {
  std::vector<std::string> segments(1);
  for (int s : h.symbols) {
    if (s == kEos) break;
    if (s == kSeg) segments.emplace_back();
    else segments.back() += vocab.Symbol(s);
  }
  std::vector<std::string> expected = h.segment_history;
  if (!h.open_segment.empty()) expected.push_back(h.open_segment);
  std::vector<std::string> actual;
  for (auto& seg : segments)
    if (!seg.empty()) actual.push_back(seg);
  // An open segment must be the trailing run of characters.
  const bool open_ok = h.open_segment.empty() ? h.symbols.empty() ||
                                                    h.symbols.back() == kSeg ||
                                                    h.symbols.back() == kEos ||
                                                    segments.back().empty()
                                              : segments.back() == h.open_segment;
  return actual == expected && open_ok && (h.closed == (!h.symbols.empty() &&
                                                        h.symbols.back() == kEos));
}

double SequenceLogProb(const CharScorer& scorer, std::span<const int> symbols) {
  DecoderState state = scorer.Start();
  int prev = kBos;
  double total = 0.0;
  for (std::size_t i = 0; i <= symbols.size(); ++i) {
    const int sym = i < symbols.size() ? symbols[i] : kEos;
    DecoderState next;
    const std::vector<double> dist = scorer.Next(state, prev, &next);
    total += std::log(dist.at(sym));
    state = std::move(next);
    prev = sym;
  }
  return total;
}

}  // namespace mlnorm
