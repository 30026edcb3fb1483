// nn_test.cc
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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "mlnorm/errors.h"
#include "mlnorm/gradcheck_suite.h"
#include "mlnorm/nn/checkpoint.h"
#include "mlnorm/nn/grad_check.h"
#include "mlnorm/nn/graph.h"
#include "mlnorm/nn/lstm.h"
#include "mlnorm/nn/sgd.h"
#include "mlnorm/nn/tensor.h"

using namespace mlnorm;
using namespace mlnorm::nn;

namespace {

LstmCell ZeroCell(std::size_t in, std::size_t hidden) {
  LstmCell cell("cell", in, hidden);
  cell.input_weights.value.Fill(0.0);
  cell.recurrent_weights.value.Fill(0.0);
  cell.bias.value.Fill(0.0);
  return cell;
}

}  // namespace

TEST_CASE("lstm step with zero parameters and zero state stays at zero") {
  const LstmCell cell = ZeroCell(3, 2);
  Graph g;
  const LstmState out = cell.Step(g, g.Constant({5.0, -2.0, 7.0}), cell.ZeroState(g));
  for (double v : g.Value(out.h)) CHECK(v == 0.0);
  for (double v : g.Value(out.c)) CHECK(v == 0.0);
}

TEST_CASE("lstm step with zero parameters halves the cell state") {
  const LstmCell cell = ZeroCell(1, 1);
  Graph g;
  const LstmState out = cell.Step(g, g.Constant({0.3}), {g.Constant({0.0}), g.Constant({1.0})});
  CHECK(g.Scalar(out.c) == doctest::Approx(0.5).epsilon(1e-15));
  // 0.5 * tanh(0.5)
  CHECK(g.Scalar(out.h) == doctest::Approx(0.2310585786300049).epsilon(1e-12));
}

TEST_CASE("lstm gate order is input, forget, candidate, output") {
  LstmCell cell = ZeroCell(1, 1);
  // Forget gate fully open, everything else shut: c' = c.
  cell.bias.value.data = {-50.0, 50.0, 0.0, -50.0};
  Graph g;
  const LstmState out = cell.Step(g, g.Constant({1.0}), {g.Constant({0.0}), g.Constant({0.7})});
  CHECK(g.Scalar(out.c) == doctest::Approx(0.7));
  CHECK(std::abs(g.Scalar(out.h)) < 1e-15);
}

TEST_CASE("lstm init uses a unit forget bias") {
  LstmCell cell("enc", 4, 3);
  cell.Init(1);
  for (std::size_t i = 0; i < 12; ++i)
    CHECK(cell.bias.value.data[i] == (i / 3 == LstmCell::kForget ? 1.0 : 0.0));
}

TEST_CASE("lstm rejects mismatched dimensions") {
  const LstmCell cell = ZeroCell(3, 2);
  Graph g;
  CHECK_THROWS_AS(cell.Step(g, g.Constant({1.0, 2.0}), cell.ZeroState(g)), ConfigError);
  CHECK_THROWS_AS(cell.Step(g, g.Constant({1.0, 2.0, 3.0}),
                            {g.Constant({0.0}), g.Constant({0.0, 0.0})}),
                  ConfigError);
}

TEST_CASE("softmax examples") {
  const std::vector<double> a = Softmax(std::vector<double>{1, 1, 1});
  for (double v : a) CHECK(v == doctest::Approx(1.0 / 3.0));
  const std::vector<double> b = Softmax(std::vector<double>{0.0, std::log(3.0)});
  CHECK(b[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(b[1] == doctest::Approx(0.75).epsilon(1e-14));
  const std::vector<double> c = Softmax(std::vector<double>{1000.0, 0.0});
  CHECK(std::isfinite(c[0]));
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK(c[1] < 1e-300);
  CHECK_THROWS_AS(Softmax(std::vector<double>{}), ConfigError);
}

TEST_CASE("softmax sums to one on extreme logits") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> logits(1 + i % 17);
    for (double& v : logits) v = u(rng);
    double s = 0.0;
    for (double p : Softmax(logits)) {
      CHECK(p >= 0.0);
      s += p;
    }
    CHECK(std::abs(s - 1.0) <= 1e-6);
  }
}

TEST_CASE("graph softmax matches the free function") {
  Graph g;
  const std::vector<double> logits = {0.2, -1.0, 3.5};
  const auto a = g.Value(g.Softmax(g.Constant(logits)));
  const auto b = Softmax(logits);
  for (std::size_t i = 0; i < 3; ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("sgd step follows the definition") {
  Parameter p("w", {1});
  p.value.data = {1.0};
  p.grad.data = {0.5};
  std::vector<Parameter*> ps = {&p};
  SgdConfig cfg;
  cfg.learning_rate = 0.1;
  cfg.clip_norm.reset();
  SgdStep(ps, cfg);
  CHECK(p.value.data[0] == doctest::Approx(0.95).epsilon(1e-15));
  CHECK(p.grad.data[0] == 0.0);
  SgdStep(ps, cfg);  // zero gradient is a fixed point
  CHECK(p.value.data[0] == doctest::Approx(0.95).epsilon(1e-15));
}

TEST_CASE("global-norm clipping scales the update") {
  Parameter a("a", {2}), b("b", {1});
  std::vector<Parameter*> ps = {&a, &b};
  auto run = [&](std::optional<double> clip) {
    a.value.Fill(0.0);
    b.value.Fill(0.0);
    a.grad.data = {6.0, 0.0};
    b.grad.data = {8.0};  // global norm 10
    SgdConfig cfg;
    cfg.learning_rate = 1.0;
    cfg.clip_norm = clip;
    CHECK(GlobalGradNorm(ps) == doctest::Approx(10.0));
    CHECK(SgdStep(ps, cfg) == doctest::Approx(10.0));
    return std::vector<double>{a.value.data[0], b.value.data[0]};
  };
  const auto unclipped = run(std::nullopt);
  const auto clipped = run(1.0);
  CHECK(clipped[0] == doctest::Approx(unclipped[0] / 10.0));
  CHECK(clipped[1] == doctest::Approx(unclipped[1] / 10.0));
}

TEST_CASE("sgd rejects bad configs and non-finite gradients") {
  Parameter p("decoder.W", {2});
  p.grad.data = {1.0, std::numeric_limits<double>::quiet_NaN()};
  std::vector<Parameter*> ps = {&p};
  SgdConfig cfg;
  try {
    SgdStep(ps, cfg);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("decoder.W") != std::string::npos);
  }
  CHECK(p.value.data[0] == 0.0);
  cfg.learning_rate = 0.0;
  CHECK_THROWS_AS(cfg.Validate(), ConfigError);
  cfg.learning_rate = 0.1;
  cfg.clip_norm = -1.0;
  CHECK_THROWS_AS(cfg.Validate(), ConfigError);
}

TEST_CASE("grad check of a quadratic is exact") {
  Parameter p("p", {5});
  p.value.data = {0.3, -1.2, 2.0, 0.01, -0.5};
  std::vector<Parameter*> ps = {&p};
  const GradCheckResult r = GradCheck(
      [&](Graph& g) {
        const Expr x = g.Leaf(p);
        return g.Scale(g.Dot(x, x), 0.5);
      },
      ps);
  CHECK(r.coordinates == 5);
  CHECK(r.max_relative_error <= 1e-8);
}

TEST_CASE("grad check aborts on a non-finite loss") {
  Parameter p("p", {1});
  p.value.data = {1e300};
  std::vector<Parameter*> ps = {&p};
  CHECK_THROWS_AS(GradCheck([&](Graph& g) { return g.Dot(g.Leaf(p), g.Leaf(p)); }, ps),
                  NumericError);
}

TEST_CASE("every differentiable operation and loss passes grad check") {
  for (std::uint64_t seed = 7; seed < 17; ++seed) {
    for (const GradCheckCase& c : RunGradCheckSuite(seed, 1e-4)) {
      INFO(c.name << " seed " << seed << " err " << c.result.max_relative_error);
      CHECK(c.passed);
      CHECK(c.result.coordinates > 0);
    }
  }
}

TEST_CASE("backward needs a scalar root") {
  Graph g;
  const Expr v = g.Constant({1.0, 2.0});
  CHECK_THROWS(g.Backward(v));
}

TEST_CASE("forward passes are deterministic") {
  LstmCell cell("c", 3, 4);
  cell.Init(5);
  auto run = [&] {
    Graph g;
    LstmState s = cell.ZeroState(g);
    for (int i = 0; i < 4; ++i) s = cell.Step(g, g.Constant({0.1 * i, -0.2, 0.3}), s);
    const auto h = g.Value(s.h);
    return std::vector<double>(h.begin(), h.end());
  };
  CHECK(run() == run());
}

TEST_CASE("glorot init is bounded and keyed by name") {
  Parameter a("layer.W", {6, 4}), b("layer.W", {6, 4}), c("other.W", {6, 4});
  GlorotInit(a, 9);
  GlorotInit(b, 9);
  GlorotInit(c, 9);
  const double bound = std::sqrt(6.0 / 10.0);
  for (double v : a.value.data) CHECK(std::abs(v) <= bound);
  CHECK(a.value.data == b.value.data);
  CHECK(a.value.data != c.value.data);
}

TEST_CASE("checkpoints round-trip bit for bit") {
  Checkpoint ck;
  ck.meta["variant"] = "plain";
  ck.vocabularies["chars"] = {"<bos>", "a", " ", "\\", "\t", "", "\n", "ä"};
  Tensor t({2, 3});
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1e3);
  for (double& v : t.data) v = n(rng);
  t.data[0] = -0.0;
  t.data[1] = std::numeric_limits<double>::denorm_min();
  ck.tensors["w"] = t;
  std::stringstream buf;
  WriteCheckpoint(buf, ck);
  const Checkpoint back = ReadCheckpoint(buf);
  CHECK(back.precision == "f64");
  CHECK(back.meta == ck.meta);
  CHECK(back.vocabularies == ck.vocabularies);
  REQUIRE(back.tensors.count("w") == 1);
  CHECK(back.tensors.at("w").shape == t.shape);
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(std::signbit(back.tensors.at("w").data[i]) == std::signbit(t.data[i]));
    CHECK(back.tensors.at("w").data[i] == t.data[i]);
  }
}

TEST_CASE("token escaping is reversible") {
  for (const std::string s : {"", "a b", "\\s", "x\ty\nz", "plain"}) {
    const std::string e = EscapeToken(s);
    CHECK(e.find(' ') == std::string::npos);
    CHECK(UnescapeToken(e) == s);
  }
}

TEST_CASE("corrupt checkpoints are rejected") {
  std::stringstream bad("not a checkpoint\n");
  CHECK_THROWS(ReadCheckpoint(bad));
}
