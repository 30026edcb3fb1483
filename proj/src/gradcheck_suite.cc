// gradcheck_suite.cc
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

#include "mlnorm/gradcheck_suite.h"

#include <functional>
#include <list>
#include <random>
#include <utility>

#include "mlnorm/model.h"
#include "mlnorm/nn/graph.h"
#include "mlnorm/nn/lstm.h"
#include "mlnorm/vocabulary.h"

namespace mlnorm {

namespace {

using nn::Expr;
using nn::Graph;
using nn::Parameter;

class OpFixture {
 public:
  explicit OpFixture(std::uint64_t seed) : rng_(seed) {}

  Parameter& Param(const std::string& name, std::vector<std::size_t> shape) {
    params_.emplace_back(name, std::move(shape));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& v : params_.back().value.data) v = u(rng_);
    return params_.back();
  }

  // Fixed random weights so a vector output reduces to a scalar with
  // distinct per-coordinate sensitivities.
  std::vector<double> Probe(std::size_t n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> p(n);
    for (double& v : p) v = u(rng_);
    return p;
  }

  std::vector<Parameter*> Pointers() {
    std::vector<Parameter*> out;
    for (Parameter& p : params_) out.push_back(&p);
    return out;
  }

 private:
  std::mt19937_64 rng_;
  std::list<Parameter> params_;
};

ModelVocabularies TinyVocabularies() {
  ModelVocabularies v;
  v.source = BuildCharVocabulary({{"a", 3}, {"b", 2}, {"c", 1}});
  v.target = BuildCharVocabulary({{"a", 2}, {"b", 2}, {"d", 1}});
  v.tags = BuildTagVocabulary({{"N", 2}, {"V", 1}, {"DET", 1}});
  v.tag_labels = BuildTagVocabulary({{"N", 1}, {"V", 1}, {"N+DET", 1}});
  return v;
}

TrainingExample TinyExample() {
  TrainingExample ex;
  ex.input.word = "ab";
  ex.input.tags = {"N", "DET"};
  ex.input.context = {"ba", "ab", "c"};
  ex.input.focus = 1;
  ex.target = "b ad";
  return ex;
}

}  // namespace

std::vector<GradCheckCase> RunGradCheckSuite(std::uint64_t seed, double tolerance) {
  std::vector<GradCheckCase> cases;
  auto run = [&](const std::string& name, const nn::LossBuilder& loss,
                 std::vector<Parameter*> params) {
    GradCheckCase c;
    c.name = name;
    c.result = nn::GradCheck(loss, params);
    c.passed = c.result.max_relative_error <= tolerance;
    cases.push_back(std::move(c));
  };
  // Reduces a vector expression to a scalar through a fixed probe.
  auto reduce = [](Graph& g, Expr e, const std::vector<double>& probe) {
    return g.Dot(e, g.Constant(probe));
  };

  {
    OpFixture f(seed);
    Parameter& table = f.Param("table", {5, 3});
    const auto probe = f.Probe(3);
    run("lookup", [&](Graph& g) { return reduce(g, g.Lookup(table, 2), probe); }, f.Pointers());
    const std::vector<std::size_t> rows = {0, 2, 2, 4};
    run("mean_rows", [&](Graph& g) { return reduce(g, g.MeanRows(table, rows), probe); },
        f.Pointers());
  }
  {
    OpFixture f(seed + 1);
    Parameter& w = f.Param("W", {4, 3});
    Parameter& x = f.Param("x", {3});
    const auto probe = f.Probe(4);
    run("matvec", [&](Graph& g) { return reduce(g, g.MatVec(g.Leaf(w), g.Leaf(x)), probe); },
        f.Pointers());
  }
  {
    OpFixture f(seed + 2);
    Parameter& a = f.Param("a", {4});
    Parameter& b = f.Param("b", {4});
    const auto probe = f.Probe(4);
    const auto probe8 = f.Probe(8);
    run("add", [&](Graph& g) { return reduce(g, g.Add(g.Leaf(a), g.Leaf(b)), probe); },
        f.Pointers());
    run("mul", [&](Graph& g) { return reduce(g, g.Mul(g.Leaf(a), g.Leaf(b)), probe); },
        f.Pointers());
    run("scale", [&](Graph& g) { return reduce(g, g.Scale(g.Leaf(a), -1.7), probe); },
        f.Pointers());
    run("sigmoid", [&](Graph& g) { return reduce(g, g.Sigmoid(g.Leaf(a)), probe); },
        f.Pointers());
    run("tanh", [&](Graph& g) { return reduce(g, g.Tanh(g.Leaf(a)), probe); }, f.Pointers());
    run("concat",
        [&](Graph& g) {
          const Expr parts[] = {g.Leaf(a), g.Leaf(b)};
          return reduce(g, g.Concat(parts), probe8);
        },
        f.Pointers());
    run("slice",
        [&](Graph& g) {
          const std::vector<double> p3(probe.begin(), probe.begin() + 3);
          return reduce(g, g.Slice(g.Leaf(a), 1, 3), p3);
        },
        f.Pointers());
    run("dot", [&](Graph& g) { return g.Dot(g.Leaf(a), g.Leaf(b)); }, f.Pointers());
    run("softmax", [&](Graph& g) { return reduce(g, g.Softmax(g.Leaf(a)), probe); },
        f.Pointers());
    run("mean",
        [&](Graph& g) {
          const Expr parts[] = {g.Leaf(a), g.Leaf(b), g.Leaf(a)};
          return reduce(g, g.Mean(parts), probe);
        },
        f.Pointers());
    run("pick_neg_log_softmax", [&](Graph& g) { return g.PickNegLogSoftmax(g.Leaf(a), 2); },
        f.Pointers());
  }
  {
    OpFixture f(seed + 3);
    Parameter& w = f.Param("w", {3});
    Parameter& v0 = f.Param("v0", {4});
    Parameter& v1 = f.Param("v1", {4});
    Parameter& v2 = f.Param("v2", {4});
    const auto probe = f.Probe(4);
    run("weighted_sum",
        [&](Graph& g) {
          const Expr vs[] = {g.Leaf(v0), g.Leaf(v1), g.Leaf(v2)};
          return reduce(g, g.WeightedSum(g.Softmax(g.Leaf(w)), vs), probe);
        },
        f.Pointers());
  }
  {
    OpFixture f(seed + 4);
    nn::LstmCell cell("cell", 3, 2);
    cell.Init(seed);
    Parameter& x0 = f.Param("x0", {3});
    Parameter& x1 = f.Param("x1", {3});
    const auto probe = f.Probe(2);
    std::vector<Parameter*> params = f.Pointers();
    params.insert(params.end(), {&cell.input_weights, &cell.recurrent_weights, &cell.bias});
    run("lstm_step",
        [&](Graph& g) {
          nn::LstmState s = cell.ZeroState(g);
          s = cell.Step(g, g.Leaf(x0), s);
          s = cell.Step(g, g.Leaf(x1), s);
          return g.Add(reduce(g, s.h, probe), reduce(g, s.c, probe));
        },
        params);
  }

  const ModelDims dims{3, 2, 3, 3};
  const TrainingExample ex = TinyExample();
  for (Variant v : {Variant::kPlain, Variant::kContext, Variant::kGoldPos,
                    Variant::kContextGoldPos, Variant::kContextPredictedPos}) {
    Seq2SeqModel model(v, dims, TinyVocabularies());
    model.Init(seed);
    if (PredictsPos(v)) {
      run("combined_loss." + std::string(VariantName(v)),
          [&](Graph& g) { return model.CombinedLoss(g, ex, 0.2); }, model.Parameters());
    } else {
      run("sequence_loss." + std::string(VariantName(v)),
          [&](Graph& g) { return model.SequenceLoss(g, ex); }, model.Parameters());
    }
  }
  return cases;
}

}  // namespace mlnorm
