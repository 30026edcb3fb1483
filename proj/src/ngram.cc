// ngram.cc
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

#include "mlnorm/ngram.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "mlnorm/errors.h"
#include "mlnorm/nn/checkpoint.h"

namespace mlnorm::lm {

namespace {

constexpr int kStartId = 0;
constexpr int kEndId = 1;
constexpr int kUnkId = 2;
constexpr const char* kMagic = "mlnorm-ngram";

bool IsValidSegment(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') return false;
  return true;
}

std::string Hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

}  // namespace

std::string_view SmoothingName(Smoothing s) {
  return s == Smoothing::kWittenBell ? "witten-bell" : "kneser-ney";
}

Smoothing ParseSmoothing(std::string_view name) {
  if (name == "witten-bell" || name == "wb") return Smoothing::kWittenBell;
  if (name == "kneser-ney" || name == "kn") return Smoothing::kKneserNey;
  throw ConfigError("unknown smoothing '" + std::string(name) + "'");
}

NgramModel NgramModel::Train(const std::vector<std::vector<std::string>>& corpus,
                             const NgramOptions& options) {
  if (options.order < 1) throw ConfigError("n-gram order must be >= 1");
  if (options.smoothing == Smoothing::kKneserNey &&
      !(options.discount > 0.0 && options.discount <= 1.0))
    throw ConfigError("Kneser-Ney discount must lie in (0, 1]");
  if (corpus.empty()) throw InputError("cannot train an n-gram model on no data");

  std::map<std::string, std::size_t> freq;
  for (const auto& sentence : corpus)
    for (const std::string& seg : sentence) {
      if (!IsValidSegment(seg))
        throw InputError("invalid segment '" + seg + "' in LM corpus");
      if (seg == kSentenceStart || seg == kSentenceEnd || seg == kUnknown)
        throw InputError("LM corpus contains reserved token " + seg);
      ++freq[seg];
    }

  NgramModel m;
  m.options_ = options;
  m.tokens_ = {std::string(kSentenceStart), std::string(kSentenceEnd),
               std::string(kUnknown)};
  for (const auto& [seg, n] : freq)
    if (!(options.unk_singletons && n == 1)) m.tokens_.push_back(seg);
  for (std::size_t i = 0; i < m.tokens_.size(); ++i)
    m.ids_.emplace(m.tokens_[i], static_cast<int>(i));

  const int N = options.order;
  m.raw_.assign(N, {});
  for (const auto& sentence : corpus) {
    std::vector<int> padded = {kStartId};
    for (const std::string& seg : sentence) padded.push_back(m.Id(seg));
    padded.push_back(kEndId);
    for (std::size_t end = 1; end < padded.size(); ++end) {
      for (int k = 0; k < N && static_cast<std::size_t>(k) < end + 1; ++k) {
        if (end < static_cast<std::size_t>(k)) break;
        Ngram g(padded.begin() + (end - k), padded.begin() + end + 1);
        m.raw_[k][g] += 1.0;
        if (g.front() == kStartId) break;
      }
    }
  }
  m.Finalize();
  return m;
}

void NgramModel::Finalize() {
  const int N = options_.order;
  stats_.assign(N, {});
  const bool kn = options_.smoothing == Smoothing::kKneserNey;
  for (int k = 0; k < N; ++k) {
    std::map<Ngram, double> continuation;
    if (kn && k + 1 < N)
      for (const auto& [g, c] : raw_[k + 1])
        if (g.front() != kStartId)
          continuation[Ngram(g.begin() + 1, g.end())] += 1.0;
    for (const auto& [g, c] : raw_[k]) {
      double eff = c;
      if (kn && k + 1 < N && g.front() != kStartId) {
        const auto it = continuation.find(g);
        eff = it == continuation.end() ? 0.0 : it->second;
      }
      if (eff <= 0.0) continue;
      HistoryStats& st = stats_[k][Ngram(g.begin(), g.end() - 1)];
      st.next[g.back()] = eff;
      st.total += eff;
      st.distinct += 1.0;
    }
  }
}

int NgramModel::Id(std::string_view token) const {
  const auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnkId : it->second;
}

bool NgramModel::Contains(std::string_view token) const {
  return ids_.count(std::string(token)) > 0;
}

std::vector<std::string> NgramModel::PredictableTokens() const {
  return {tokens_.begin() + 1, tokens_.end()};
}

double NgramModel::Prob(std::span<const int> history, int next) const {
  const bool kn = options_.smoothing == Smoothing::kKneserNey;
  const double D = options_.discount;
  double lower;
  if (history.empty()) {
    lower = 1.0 / static_cast<double>(tokens_.size() - 1);
  } else {
    lower = Prob(history.subspan(1), next);
  }
  const auto& level = stats_[history.size()];
  const auto it = level.find(Ngram(history.begin(), history.end()));
  if (it == level.end() || it->second.total <= 0.0) return lower;
  const HistoryStats& st = it->second;
  const auto hit = st.next.find(next);
  const double c = hit == st.next.end() ? 0.0 : hit->second;
  if (kn)
    return std::max(c - D, 0.0) / st.total + D * st.distinct / st.total * lower;
  return (c + st.distinct * lower) / (st.total + st.distinct);
}

double NgramModel::BackoffWeight(std::span<const int> history) const {
  const auto& level = stats_[history.size()];
  const auto it = level.find(Ngram(history.begin(), history.end()));
  if (it == level.end() || it->second.total <= 0.0) return 1.0;
  const HistoryStats& st = it->second;
  if (options_.smoothing == Smoothing::kKneserNey)
    return options_.discount * st.distinct / st.total;
  return st.distinct / (st.total + st.distinct);
}

std::vector<int> NgramModel::ContextIds(std::span<const std::string> context) const {
  std::vector<int> ids;
  for (const std::string& t : context) ids.push_back(Id(t));
  const std::size_t keep = static_cast<std::size_t>(options_.order - 1);
  if (ids.size() > keep) ids.erase(ids.begin(), ids.end() - keep);
  return ids;
}

double NgramModel::LogProb(std::span<const std::string> context,
                           std::string_view next) const {
  if (tokens_.empty()) throw ConfigError("n-gram model is not trained");
  if (next == kSentenceStart) throw InputError("<s> is never predicted");
  const std::vector<int> ids = ContextIds(context);
  return std::log(Prob(ids, Id(next)));
}

double NgramModel::ScoreSegment(std::span<const std::string> history,
                                std::string_view next) const {
  std::vector<std::string> ctx;
  ctx.reserve(history.size() + 1);
  ctx.emplace_back(kSentenceStart);
  const std::size_t keep = static_cast<std::size_t>(std::max(options_.order - 1, 0));
  const std::size_t from = history.size() > keep ? history.size() - keep : 0;
  ctx.insert(ctx.end(), history.begin() + from, history.end());
  return LogProb(ctx, next);
}

double NgramModel::Count(std::span<const std::string> ngram) const {
  if (ngram.empty() || ngram.size() > raw_.size()) return 0.0;
  Ngram ids;
  for (const std::string& t : ngram) {
    if (!Contains(t)) return 0.0;
    ids.push_back(Id(t));
  }
  const auto& level = raw_[ngram.size() - 1];
  const auto it = level.find(ids);
  return it == level.end() ? 0.0 : it->second;
}

double NgramModel::MleProb(std::span<const std::string> context,
                           std::string_view next) const {
  if (context.size() + 1 > raw_.size()) return 0.0;
  Ngram ids;
  for (const std::string& t : context) {
    if (!Contains(t)) return 0.0;
    ids.push_back(Id(t));
  }
  double total = 0.0, hit = 0.0;
  for (const auto& [g, c] : raw_[context.size()])
    if (std::equal(ids.begin(), ids.end(), g.begin())) {
      total += c;
      if (g.back() == Id(next) && Contains(next)) hit = c;
    }
  return total > 0.0 ? hit / total : 0.0;
}

double NgramModel::ScoreEnd(std::span<const std::string> history) const {
  return ScoreSegment(history, kSentenceEnd);
}

double NgramModel::ScoreSentence(std::span<const std::string> segments) const {
  double total = 0.0;
  for (std::size_t i = 0; i < segments.size(); ++i)
    total += ScoreSegment(segments.first(i), segments[i]);
  return total + ScoreEnd(segments);
}

void NgramModel::Save(std::ostream& out) const {
  out << kMagic << " 1\n";
  out << "order " << options_.order << '\n';
  out << "smoothing " << SmoothingName(options_.smoothing) << '\n';
  out << "discount " << Hex(options_.discount) << '\n';
  out << "unk_singletons " << (options_.unk_singletons ? 1 : 0) << '\n';
  out << "vocab " << tokens_.size() - 3 << '\n';
  for (std::size_t i = 3; i < tokens_.size(); ++i)
    out << nn::EscapeToken(tokens_[i]) << '\n';
  for (int k = 0; k < options_.order; ++k) {
    out << "counts " << k + 1 << ' ' << raw_[k].size() << '\n';
    for (const auto& [g, c] : raw_[k]) {
      for (int id : g) out << id << ' ';
      out << static_cast<long long>(c) << '\n';
    }
  }
  out << "end\n";
}

NgramModel NgramModel::Load(std::istream& in) {
  auto next_line = [&](const char* what) {
    std::string line;
    if (!std::getline(in, line))
      throw InputError(std::string("n-gram file truncated at ") + what);
    return line;
  };
  auto field = [&](const char* key) {
    std::istringstream ls(next_line(key));
    std::string k, v;
    ls >> k >> v;
    if (k != key) throw InputError(std::string("n-gram file: expected ") + key);
    return v;
  };
  {
    std::istringstream head(next_line("header"));
    std::string magic;
    int version = 0;
    head >> magic >> version;
    if (magic != kMagic || version != 1) throw InputError("not an mlnorm n-gram file");
  }
  NgramModel m;
  m.options_.order = std::stoi(field("order"));
  m.options_.smoothing = ParseSmoothing(field("smoothing"));
  m.options_.discount = std::strtod(field("discount").c_str(), nullptr);
  m.options_.unk_singletons = field("unk_singletons") == "1";
  if (m.options_.order < 1) throw InputError("n-gram file: bad order");
  const std::size_t n = std::stoull(field("vocab"));
  m.tokens_ = {std::string(kSentenceStart), std::string(kSentenceEnd),
               std::string(kUnknown)};
  for (std::size_t i = 0; i < n; ++i)
    m.tokens_.push_back(nn::UnescapeToken(next_line("vocab")));
  for (std::size_t i = 0; i < m.tokens_.size(); ++i)
    m.ids_.emplace(m.tokens_[i], static_cast<int>(i));
  m.raw_.assign(m.options_.order, {});
  for (int k = 0; k < m.options_.order; ++k) {
    std::istringstream ls(next_line("counts"));
    std::string key;
    int len = 0;
    std::size_t count = 0;
    ls >> key >> len >> count;
    if (key != "counts" || len != k + 1) throw InputError("n-gram file: bad counts header");
    for (std::size_t i = 0; i < count; ++i) {
      std::istringstream es(next_line("count entry"));
      Ngram g(len);
      long long c = 0;
      for (int& id : g) es >> id;
      es >> c;
      if (!es) throw InputError("n-gram file: bad count entry");
      for (int id : g)
        if (id < 0 || static_cast<std::size_t>(id) >= m.tokens_.size())
          throw InputError("n-gram file: token id out of range");
      m.raw_[k][g] = static_cast<double>(c);
    }
  }
  if (next_line("end") != "end") throw InputError("n-gram file: missing end");
  m.Finalize();
  return m;
}

void NgramModel::SaveFile(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  Save(out);
}

NgramModel NgramModel::LoadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  return Load(in);
}

void NgramModel::WriteArpa(std::ostream& out) const {
  const int N = options_.order;
  std::vector<std::vector<Ngram>> entries(N);
  for (std::size_t id = 0; id < tokens_.size(); ++id)
    entries[0].push_back({static_cast<int>(id)});
  for (int k = 1; k < N; ++k)
    for (const auto& [h, st] : stats_[k])
      for (const auto& [w, c] : st.next) {
        Ngram g = h;
        g.push_back(w);
        entries[k].push_back(std::move(g));
      }
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.7f", v);
    return std::string(buf);
  };
  out << "\\data\\\n";
  for (int k = 0; k < N; ++k)
    out << "ngram " << k + 1 << '=' << entries[k].size() << '\n';
  for (int k = 0; k < N; ++k) {
    out << "\n\\" << k + 1 << "-grams:\n";
    for (const Ngram& g : entries[k]) {
      const std::span<const int> all(g);
      const double logp = g.back() == kStartId
                              ? -99.0
                              : std::log10(Prob(all.first(g.size() - 1), g.back()));
      out << fmt(logp);
      for (int id : g) out << '\t' << tokens_[id];
      if (k + 1 < N && stats_[k + 1].count(g))
        out << '\t' << fmt(std::log10(BackoffWeight(all)));
      out << '\n';
    }
  }
  out << "\n\\end\\\n";
}

}  // namespace mlnorm::lm
