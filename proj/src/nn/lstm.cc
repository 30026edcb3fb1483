// lstm.cc
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

#include "mlnorm/nn/lstm.h"

#include "mlnorm/errors.h"

namespace mlnorm::nn {

LstmCell::LstmCell(const std::string& name, std::size_t input_size,
                   std::size_t hidden_size)
    : input_weights(name + ".W", {4 * hidden_size, input_size}),
      recurrent_weights(name + ".U", {4 * hidden_size, hidden_size}),
      bias(name + ".b", {4 * hidden_size}),
      input_size_(input_size),
      hidden_size_(hidden_size) {
  if (input_size == 0 || hidden_size == 0)
    throw ConfigError("lstm " + name + ": zero-sized dimension");
}

void LstmCell::Init(std::uint64_t seed) {
  GlorotInit(input_weights, seed);
  GlorotInit(recurrent_weights, seed);
  bias.value.Fill(0.0);
  for (std::size_t i = 0; i < hidden_size_; ++i)
    bias.value.data[kForget * hidden_size_ + i] = 1.0;
}

LstmState LstmCell::ZeroState(Graph& g) const {
  return {g.Constant(std::vector<double>(hidden_size_, 0.0)),
          g.Constant(std::vector<double>(hidden_size_, 0.0))};
}

LstmState LstmCell::Step(Graph& g, Expr input, LstmState state) const {
  if (g.Size(input) != input_size_)
    throw ConfigError("lstm " + bias.name + ": input has dimension " +
                      std::to_string(g.Size(input)) + ", expected " +
                      std::to_string(input_size_));
  if (g.Size(state.h) != hidden_size_ || g.Size(state.c) != hidden_size_)
    throw ConfigError("lstm " + bias.name + ": state dimension mismatch");
  const std::size_t H = hidden_size_;
  Expr z = g.Add(g.Add(g.MatVec(g.Leaf(input_weights), input),
                       g.MatVec(g.Leaf(recurrent_weights), state.h)),
                 g.Leaf(bias));
  Expr i = g.Sigmoid(g.Slice(z, kInput * H, H));
  Expr f = g.Sigmoid(g.Slice(z, kForget * H, H));
  Expr cand = g.Tanh(g.Slice(z, kCandidate * H, H));
  Expr o = g.Sigmoid(g.Slice(z, kOutput * H, H));
  Expr c = g.Add(g.Mul(f, state.c), g.Mul(i, cand));
  Expr h = g.Mul(o, g.Tanh(c));
  return {h, c};
}

std::vector<Expr> RunLstm(Graph& g, const LstmCell& cell,
                          const std::vector<Expr>& inputs, LstmState start) {
  std::vector<Expr> out;
  out.reserve(inputs.size());
  LstmState s = start;
  for (Expr x : inputs) {
    s = cell.Step(g, x, s);
    out.push_back(s.h);
  }
  return out;
}

}  // namespace mlnorm::nn
