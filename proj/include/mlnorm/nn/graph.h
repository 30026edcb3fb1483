// graph.h
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

#ifndef MLNORM_NN_GRAPH_H_
#define MLNORM_NN_GRAPH_H_

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mlnorm/nn/tensor.h"

namespace mlnorm::nn {

// Handle to a node of a Graph. Only meaningful for the graph that made it.
struct Expr {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode autodiff tape over a fixed op set. Nodes are vectors except
// parameter leaves, which may be matrices. Parameter leaves are views: the
// tape never copies weights, and Backward() accumulates straight into
// Parameter::grad.
//
// A Graph is single-use and single-threaded; build a fresh one per example
// or per decoding step.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Expr Constant(std::vector<double> values);
  Expr Leaf(const Parameter& p);
  // Row `row` of a [rows x cols] table.
  Expr Lookup(const Parameter& table, std::size_t row);
  // Mean of the given rows of a table. rows must be nonempty.
  Expr MeanRows(const Parameter& table, std::span<const std::size_t> rows);

  Expr MatVec(Expr matrix, Expr vec);
  Expr Add(Expr a, Expr b);
  Expr Mul(Expr a, Expr b);
  Expr Scale(Expr a, double k);
  Expr Sigmoid(Expr a);
  Expr Tanh(Expr a);
  Expr Concat(std::span<const Expr> parts);
  Expr Slice(Expr a, std::size_t offset, std::size_t length);
  // Scalar (size-1) dot product.
  Expr Dot(Expr a, Expr b);
  Expr Softmax(Expr logits);
  // sum_i weights[i] * vectors[i]
  Expr WeightedSum(Expr weights, std::span<const Expr> vectors);
  // Elementwise mean of equally sized vectors.
  Expr Mean(std::span<const Expr> parts);
  // -log softmax(logits)[target], fused for stability.
  Expr PickNegLogSoftmax(Expr logits, std::size_t target);

  std::span<const double> Value(Expr e) const;
  double Scalar(Expr e) const;
  std::size_t Size(Expr e) const;

  // Seeds d(root)/d(root) = 1 and propagates to every node and parameter.
  // root must be a scalar.
  void Backward(Expr root);

  // Names of parameters read by this graph.
  std::set<std::string> TouchedParameters() const;
  std::size_t node_count() const { return nodes_.size(); }

 private:
  enum class Op {
    kConstant, kLeaf, kLookup, kMeanRows, kMatVec, kAdd, kMul, kScale,
    kSigmoid, kTanh, kConcat, kSlice, kDot, kSoftmax, kWeightedSum, kMean,
    kPickNll,
  };

  struct Node {
    explicit Node(Op o) : op(o) {}
    Op op;
    std::size_t rows = 0;
    std::size_t cols = 1;
    std::vector<double> value;
    std::vector<double> grad;
    const Parameter* param = nullptr;
    std::vector<int> inputs;
    std::vector<std::size_t> index;
    double scalar = 0.0;
  };

  Expr Push(Node node);
  const double* Val(int id) const;
  double* Grad(int id);
  const Node& At(Expr e) const;

  std::vector<Node> nodes_;
};

// Numerically stabilised softmax shared by graph and non-graph callers.
std::vector<double> Softmax(std::span<const double> logits);

}  // namespace mlnorm::nn

#endif  // MLNORM_NN_GRAPH_H_
