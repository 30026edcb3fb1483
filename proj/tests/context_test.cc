// context_test.cc
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
#include <random>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "mlnorm/corpus.h"
#include "mlnorm/errors.h"
#include "mlnorm/model.h"
#include "mlnorm/nn/tensor.h"
#include "mlnorm/trainer.h"
#include "testing.h"

namespace mlnorm {
namespace {

using testing::Example;
using Vec = std::vector<double>;

const ModelDims kDims{4, 3, 5, 4};

Seq2SeqModel Model(Variant v, std::uint64_t seed = 2) {
  Seq2SeqModel m(v, kDims,
                 testing::MakeVocabularies("abcde", "abcxy", {"N", "V", "DET"},
                                           {"N", "V", "N+DET"}));
  m.Init(seed);
  return m;
}

void Randomize(Seq2SeqModel& m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (nn::Parameter* p : m.Parameters())
    for (double& v : p->value.data) v = u(rng);
}

Vec Values(const nn::Graph& g, nn::Expr e) {
  const auto s = g.Value(e);
  return {s.begin(), s.end()};
}

Vec PosRow(Seq2SeqModel& m, const std::string& tag) {
  const nn::Tensor& t = m.FindParameter("pos.embed")->value;
  const std::size_t r = static_cast<std::size_t>(m.vocab().tags.Index(tag));
  return Vec(t.data.begin() + static_cast<long>(r * t.cols()),
             t.data.begin() + static_cast<long>((r + 1) * t.cols()));
}

TEST_CASE("context encoding has one 2C state per word") {
  Seq2SeqModel m = Model(Variant::kContext);
  nn::Graph g;
  const ContextEncoding one = m.EncodeContext(g, std::vector<std::string>{"abc"});
  REQUIRE(one.states.size() == 1);
  CHECK(g.Size(one.states[0]) == 2 * kDims.context_hidden);
  CHECK(g.Size(one.word_summaries[0]) == 2 * kDims.context_hidden);
  const ContextEncoding three =
      m.EncodeContext(g, std::vector<std::string>{"ab", "c", "dea"});
  CHECK(three.states.size() == 3);
  CHECK_THROWS_AS(m.EncodeContext(g, std::vector<std::string>{}), InputError);
}

TEST_CASE("zero parameters give a zero focus encoding") {
  Seq2SeqModel m = Model(Variant::kContext);
  for (nn::Parameter* p : m.Parameters()) p->value.Fill(0.0);
  nn::Graph g;
  const ContextEncoding enc = m.EncodeContext(g, std::vector<std::string>{"ab", "cd"});
  for (auto s : enc.states)
    for (double v : g.Value(s)) CHECK(v == 0.0);
}

TEST_CASE("focus encoding depends on the surrounding words") {
  Seq2SeqModel m = Model(Variant::kContext);
  Randomize(m, 3);
  nn::Graph g;
  const ContextEncoding a = m.EncodeContext(g, std::vector<std::string>{"ab", "cd", "e"});
  const ContextEncoding b = m.EncodeContext(g, std::vector<std::string>{"e", "cd", "ab"});
  CHECK(Values(g, a.states[1]) != Values(g, b.states[1]));
  // The lower level sees only the word itself.
  CHECK(Values(g, a.word_summaries[1]) == Values(g, b.word_summaries[1]));
}

TEST_CASE("POS embedding averages tag rows") {
  Seq2SeqModel m = Model(Variant::kGoldPos);
  Randomize(m, 4);
  const Vec n = PosRow(m, "N"), det = PosRow(m, "DET");
  nn::Graph g;
  CHECK(Values(g, m.EmbedPos(g, std::vector<std::string>{"N"})) == n);
  CHECK(Values(g, m.EmbedPos(g, std::vector<std::string>{"N", "N"})) == n);
  const Vec both = Values(g, m.EmbedPos(g, std::vector<std::string>{"N", "DET"}));
  const Vec swapped = Values(g, m.EmbedPos(g, std::vector<std::string>{"DET", "N"}));
  for (std::size_t k = 0; k < n.size(); ++k) {
    CHECK(both[k] == doctest::Approx((n[k] + det[k]) / 2).epsilon(1e-15));
    CHECK(swapped[k] == doctest::Approx(both[k]).epsilon(1e-15));
  }
  const Vec three = Values(g, m.EmbedPos(g, std::vector<std::string>{"V", "N", "DET"}));
  const Vec three_perm = Values(g, m.EmbedPos(g, std::vector<std::string>{"DET", "V", "N"}));
  for (std::size_t k = 0; k < n.size(); ++k)
    CHECK(three[k] == doctest::Approx(three_perm[k]).epsilon(1e-14));
  // Unseen tags fall back to the UNK-tag row.
  const nn::Tensor& t = m.FindParameter("pos.embed")->value;
  const Vec unk(t.data.begin(), t.data.begin() + static_cast<long>(t.cols()));
  CHECK(Values(g, m.EmbedPos(g, std::vector<std::string>{"ADJ"})) == unk);
  CHECK_THROWS_AS(m.EmbedPos(g, std::vector<std::string>{}), InputError);
}

TEST_CASE("zero classifier predicts a uniform tag distribution") {
  Seq2SeqModel m = Model(Variant::kContextPredictedPos);
  Randomize(m, 5);
  m.FindParameter("pos.W_f")->value.Fill(0.0);
  SourceInput in;
  in.word = "ab";
  in.context = {"ab", "c"};
  const PreparedSource p = m.Prepare(in);
  REQUIRE(p.tag_distribution.size() == m.vocab().tag_labels.size());
  for (double x : p.tag_distribution)
    CHECK(x == doctest::Approx(1.0 / static_cast<double>(p.tag_distribution.size())));
}

TEST_CASE("combined loss adds alpha times the tagging loss") {
  Seq2SeqModel m = Model(Variant::kContextPredictedPos);
  Randomize(m, 6);
  const TrainingExample ex = Example("cd", "cx", {"N", "DET"}, {"ab", "cd", "e"}, 1);

  nn::Graph g;
  const ContextEncoding enc = m.EncodeContext(g, ex.input.context);
  const Vec hx = Values(g, enc.states[1]);
  const nn::Tensor& wf = m.FindParameter("pos.W_f")->value;
  Vec logits(wf.rows(), 0.0);
  for (std::size_t r = 0; r < wf.rows(); ++r)
    for (std::size_t c = 0; c < wf.cols(); ++c) logits[r] += wf.data[r * wf.cols() + c] * hx[c];
  double z = 0.0;
  for (double l : logits) z += std::exp(l);
  const std::size_t label = static_cast<std::size_t>(m.vocab().tag_labels.Index("N+DET"));
  const double tagging = std::log(z) - logits[label];

  const double seq = m.SequenceLossValue(ex);
  CHECK(m.CombinedLossValue(ex, 0.2) == doctest::Approx(seq + 0.2 * tagging).epsilon(1e-13));
  CHECK(m.CombinedLossValue(ex, 0.0) == seq);
  CHECK_THROWS_AS(m.CombinedLossValue(ex, -1.0), ConfigError);
}

TEST_CASE("combined loss requires the predicted-POS variant and a gold tag") {
  const TrainingExample ex = Example("ab", "ab", {"N"}, {"ab"}, 0);
  CHECK_THROWS_AS(Model(Variant::kContextGoldPos).CombinedLossValue(ex, 0.2), ConfigError);
  CHECK_THROWS_AS(Model(Variant::kPlain).CombinedLossValue(ex, 0.2), ConfigError);
  CHECK_THROWS_AS(
      Model(Variant::kContextPredictedPos).CombinedLossValue(Example("ab", "ab", {}, {"ab"}), 0.2),
      InputError);
}

TEST_CASE("missing context or tags are input errors") {
  CHECK_THROWS_AS(Model(Variant::kContext).SequenceLossValue(Example("ab", "ab", {"N"})),
                  InputError);
  CHECK_THROWS_AS(
      Model(Variant::kContextGoldPos).SequenceLossValue(Example("ab", "ab", {}, {"ab"})),
      InputError);
  CHECK_NOTHROW(
      Model(Variant::kContextGoldPos).SequenceLossValue(Example("ab", "ab", {"N"}, {"ab"})));
}

TEST_CASE("predicted-POS inference ignores gold tags") {
  Seq2SeqModel m = Model(Variant::kContextPredictedPos);
  Randomize(m, 7);
  SourceInput in;
  in.word = "ab";
  in.context = {"ab", "cde"};
  const PreparedSource none = m.Prepare(in);
  in.tags = {"V"};
  const PreparedSource gold = m.Prepare(in);
  CHECK(none.pos == gold.pos);

  nn::Graph train;
  (void)m.CombinedLoss(train, Example("ab", "ab", {"N"}, {"ab", "cde"}), 0.2);
  CHECK(train.TouchedParameters().count("pos.W_f") == 1);
  nn::Graph infer;
  (void)m.EncodeSource(infer, in, PosSource::kPredictedArgmax);
  const std::set<std::string> used = infer.TouchedParameters();
  CHECK(used.count("pos.W_f") == 1);
  CHECK(used.count("pos.embed") == 1);
  CHECK(used.count("dec.W") == 0);
}

TEST_CASE("expected POS embedding with a zero classifier is the mean label embedding") {
  Seq2SeqModel m = Model(Variant::kContextPredictedPos);
  Randomize(m, 8);
  m.FindParameter("pos.W_f")->value.Fill(0.0);
  m.set_expected_pos_embedding(true);
  SourceInput in;
  in.word = "ab";
  in.context = {"ab"};
  const PreparedSource p = m.Prepare(in);
  Vec expect(kDims.pos_embedding, 0.0);
  nn::Graph g;
  const auto& labels = m.vocab().tag_labels.symbols();
  for (const std::string& label : labels) {
    std::vector<std::string> tags;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= label.size(); ++i)
      if (i == label.size() || label[i] == '+') {
        tags.push_back(label.substr(start, i - start));
        start = i + 1;
      }
    const Vec e = Values(g, m.EmbedPos(g, tags));
    for (std::size_t k = 0; k < e.size(); ++k) expect[k] += e[k] / static_cast<double>(labels.size());
  }
  for (std::size_t k = 0; k < expect.size(); ++k)
    CHECK(p.pos[k] == doctest::Approx(expect[k]).epsilon(1e-13));
}

TEST_CASE("with alpha 0 the predicted-POS model trains like the gold-POS model") {
  const Corpus corpus = testing::PosCorpus(12, 3, "s");
  const std::vector<ExampleGroup> train = ToExamples(corpus);
  TrainConfig cfg;
  cfg.max_epochs = 1;
  cfg.alpha = 0.0;
  const ModelVocabularies v = BuildVocab(corpus, " ");
  Seq2SeqModel gold(Variant::kContextGoldPos, kDims, v);
  Seq2SeqModel pred(Variant::kContextPredictedPos, kDims, v);
  gold.Init(9);
  pred.Init(9);
  const Seq2SeqModel a = TrainModel(gold, train, {}, cfg, 4).model;
  Seq2SeqModel bm = TrainModel(pred, train, {}, cfg, 4).model;
  for (const nn::Parameter* p : a.Parameters()) {
    const nn::Parameter* q = bm.FindParameter(p->name);
    REQUIRE(q != nullptr);
    CHECK_MESSAGE(p->value.data == q->value.data, p->name);
  }
  CHECK(bm.FindParameter("pos.W_f") != nullptr);
}

}  // namespace
}  // namespace mlnorm
