// lstm.h
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

#ifndef MLNORM_NN_LSTM_H_
#define MLNORM_NN_LSTM_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mlnorm/nn/graph.h"
#include "mlnorm/nn/tensor.h"

namespace mlnorm::nn {

struct LstmState {
  Expr h;
  Expr c;
};

// Standard LSTM with sigmoid gates and tanh squashing:
//
//   z  = W x + U h + b          (4H, gate blocks in order i, f, g, o)
//   c' = sigmoid(z_f) * c + sigmoid(z_i) * tanh(z_g)
//   h' = sigmoid(z_o) * tanh(c')
class LstmCell {
 public:
  enum Gate : std::size_t { kInput = 0, kForget = 1, kCandidate = 2, kOutput = 3 };

  LstmCell() = default;
  LstmCell(const std::string& name, std::size_t input_size,
           std::size_t hidden_size);

  // Glorot for both weight matrices, zero bias except forget block = 1.
  void Init(std::uint64_t seed);

  LstmState Step(Graph& g, Expr input, LstmState state) const;
  LstmState ZeroState(Graph& g) const;

  std::size_t input_size() const { return input_size_; }
  std::size_t hidden_size() const { return hidden_size_; }

  Parameter input_weights;      // [4H x D]
  Parameter recurrent_weights;  // [4H x H]
  Parameter bias;               // [4H]

 private:
  std::size_t input_size_ = 0;
  std::size_t hidden_size_ = 0;
};

// Runs `cell` over `inputs` left to right; returns the hidden state after
// each input.
std::vector<Expr> RunLstm(Graph& g, const LstmCell& cell,
                          const std::vector<Expr>& inputs, LstmState start);

}  // namespace mlnorm::nn

#endif  // MLNORM_NN_LSTM_H_
