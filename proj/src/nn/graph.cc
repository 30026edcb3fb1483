// graph.cc
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

#include "mlnorm/nn/graph.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "mlnorm/errors.h"

namespace mlnorm::nn {

namespace {

double SigmoidScalar(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void Require(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("graph: ") + what);
}

}  // namespace

std::vector<double> Softmax(std::span<const double> logits) {
  if (logits.empty()) throw ConfigError("softmax of an empty vector");
  const double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

Expr Graph::Push(Node node) {
  nodes_.push_back(std::move(node));
  return Expr{static_cast<int>(nodes_.size()) - 1};
}

const Graph::Node& Graph::At(Expr e) const {
  Require(e.id >= 0 && static_cast<std::size_t>(e.id) < nodes_.size(),
          "expression does not belong to this graph");
  return nodes_[e.id];
}

const double* Graph::Val(int id) const {
  const Node& n = nodes_[id];
  return n.op == Op::kLeaf ? n.param->value.data.data() : n.value.data();
}

double* Graph::Grad(int id) {
  Node& n = nodes_[id];
  return n.op == Op::kLeaf ? n.param->grad.data.data() : n.grad.data();
}

std::size_t Graph::Size(Expr e) const {
  const Node& n = At(e);
  return n.rows * n.cols;
}

std::span<const double> Graph::Value(Expr e) const {
  return {Val(e.id), Size(e)};
}

double Graph::Scalar(Expr e) const {
  Require(Size(e) == 1, "Scalar() on a non-scalar node");
  return Val(e.id)[0];
}

Expr Graph::Constant(std::vector<double> values) {
  Node n(Op::kConstant);
  n.rows = values.size();
  n.value = std::move(values);
  return Push(std::move(n));
}

Expr Graph::Leaf(const Parameter& p) {
  Node n(Op::kLeaf);
  n.rows = p.value.rows();
  n.cols = p.value.cols();
  n.param = &p;
  return Push(std::move(n));
}

Expr Graph::Lookup(const Parameter& table, std::size_t row) {
  Require(row < table.value.rows(), "lookup row out of range");
  const std::size_t d = table.value.cols();
  Node n(Op::kLookup);
  n.rows = d;
  n.param = &table;
  n.index = {row};
  const double* src = table.value.data.data() + row * d;
  n.value.assign(src, src + d);
  return Push(std::move(n));
}

Expr Graph::MeanRows(const Parameter& table, std::span<const std::size_t> rows) {
  Require(!rows.empty(), "mean of zero rows");
  const std::size_t d = table.value.cols();
  Node n(Op::kMeanRows);
  n.rows = d;
  n.param = &table;
  n.index.assign(rows.begin(), rows.end());
  n.value.assign(d, 0.0);
  for (std::size_t r : rows) {
    Require(r < table.value.rows(), "lookup row out of range");
    const double* src = table.value.data.data() + r * d;
    for (std::size_t j = 0; j < d; ++j) n.value[j] += src[j];
  }
  const double k = static_cast<double>(rows.size());
  for (double& v : n.value) v /= k;
  return Push(std::move(n));
}

Expr Graph::MatVec(Expr matrix, Expr vec) {
  const Node& m = At(matrix);
  Require(Size(vec) == m.cols, "matvec dimension mismatch");
  Node n(Op::kMatVec);
  n.rows = m.rows;
  n.inputs = {matrix.id, vec.id};
  n.value.assign(m.rows, 0.0);
  const double* w = Val(matrix.id);
  const double* x = Val(vec.id);
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double* row = w + r * m.cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < m.cols; ++c) acc += row[c] * x[c];
    n.value[r] = acc;
  }
  return Push(std::move(n));
}

Expr Graph::Add(Expr a, Expr b) {
  const std::size_t d = Size(a);
  Require(Size(b) == d, "add dimension mismatch");
  Node n(Op::kAdd);
  n.rows = d;
  n.inputs = {a.id, b.id};
  n.value.resize(d);
  const double* x = Val(a.id);
  const double* y = Val(b.id);
  for (std::size_t i = 0; i < d; ++i) n.value[i] = x[i] + y[i];
  return Push(std::move(n));
}

Expr Graph::Mul(Expr a, Expr b) {
  const std::size_t d = Size(a);
  Require(Size(b) == d, "mul dimension mismatch");
  Node n(Op::kMul);
  n.rows = d;
  n.inputs = {a.id, b.id};
  n.value.resize(d);
  const double* x = Val(a.id);
  const double* y = Val(b.id);
  for (std::size_t i = 0; i < d; ++i) n.value[i] = x[i] * y[i];
  return Push(std::move(n));
}

Expr Graph::Scale(Expr a, double k) {
  const std::size_t d = Size(a);
  Node n(Op::kScale);
  n.rows = d;
  n.inputs = {a.id};
  n.scalar = k;
  n.value.resize(d);
  const double* x = Val(a.id);
  for (std::size_t i = 0; i < d; ++i) n.value[i] = k * x[i];
  return Push(std::move(n));
}

Expr Graph::Sigmoid(Expr a) {
  const std::size_t d = Size(a);
  Node n(Op::kSigmoid);
  n.rows = d;
  n.inputs = {a.id};
  n.value.resize(d);
  const double* x = Val(a.id);
  for (std::size_t i = 0; i < d; ++i) n.value[i] = SigmoidScalar(x[i]);
  return Push(std::move(n));
}

Expr Graph::Tanh(Expr a) {
  const std::size_t d = Size(a);
  Node n(Op::kTanh);
  n.rows = d;
  n.inputs = {a.id};
  n.value.resize(d);
  const double* x = Val(a.id);
  for (std::size_t i = 0; i < d; ++i) n.value[i] = std::tanh(x[i]);
  return Push(std::move(n));
}

Expr Graph::Concat(std::span<const Expr> parts) {
  Require(!parts.empty(), "concat of nothing");
  Node n(Op::kConcat);
  for (Expr p : parts) {
    const double* x = Val(p.id);
    n.value.insert(n.value.end(), x, x + Size(p));
    n.inputs.push_back(p.id);
  }
  n.rows = n.value.size();
  return Push(std::move(n));
}

Expr Graph::Slice(Expr a, std::size_t offset, std::size_t length) {
  Require(offset + length <= Size(a) && length > 0, "slice out of range");
  Node n(Op::kSlice);
  n.rows = length;
  n.inputs = {a.id};
  n.index = {offset};
  const double* x = Val(a.id) + offset;
  n.value.assign(x, x + length);
  return Push(std::move(n));
}

Expr Graph::Dot(Expr a, Expr b) {
  const std::size_t d = Size(a);
  Require(Size(b) == d, "dot dimension mismatch");
  Node n(Op::kDot);
  n.rows = 1;
  n.inputs = {a.id, b.id};
  const double* x = Val(a.id);
  const double* y = Val(b.id);
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) acc += x[i] * y[i];
  n.value = {acc};
  return Push(std::move(n));
}

Expr Graph::Softmax(Expr logits) {
  Node n(Op::kSoftmax);
  n.rows = Size(logits);
  n.inputs = {logits.id};
  n.value = nn::Softmax(Value(logits));
  return Push(std::move(n));
}

Expr Graph::WeightedSum(Expr weights, std::span<const Expr> vectors) {
  Require(!vectors.empty() && Size(weights) == vectors.size(),
          "weighted sum needs one weight per vector");
  const std::size_t d = Size(vectors[0]);
  Node n(Op::kWeightedSum);
  n.rows = d;
  n.inputs = {weights.id};
  n.value.assign(d, 0.0);
  const double* w = Val(weights.id);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    Require(Size(vectors[i]) == d, "weighted sum dimension mismatch");
    const double* x = Val(vectors[i].id);
    for (std::size_t j = 0; j < d; ++j) n.value[j] += w[i] * x[j];
    n.inputs.push_back(vectors[i].id);
  }
  return Push(std::move(n));
}

Expr Graph::Mean(std::span<const Expr> parts) {
  Require(!parts.empty(), "mean of nothing");
  const std::size_t d = Size(parts[0]);
  Node n(Op::kMean);
  n.rows = d;
  n.value.assign(d, 0.0);
  for (Expr p : parts) {
    Require(Size(p) == d, "mean dimension mismatch");
    const double* x = Val(p.id);
    for (std::size_t j = 0; j < d; ++j) n.value[j] += x[j];
    n.inputs.push_back(p.id);
  }
  const double k = static_cast<double>(parts.size());
  for (double& v : n.value) v /= k;
  return Push(std::move(n));
}

Expr Graph::PickNegLogSoftmax(Expr logits, std::size_t target) {
  const std::size_t d = Size(logits);
  Require(target < d, "target index out of range");
  const double* x = Val(logits.id);
  const double mx = *std::max_element(x, x + d);
  double sum = 0.0;
  for (std::size_t i = 0; i < d; ++i) sum += std::exp(x[i] - mx);
  Node n(Op::kPickNll);
  n.rows = 1;
  n.inputs = {logits.id};
  n.index = {target};
  n.value = {std::log(sum) + mx - x[target]};
  return Push(std::move(n));
}

std::set<std::string> Graph::TouchedParameters() const {
  std::set<std::string> names;
  for (const Node& n : nodes_)
    if (n.param != nullptr) names.insert(n.param->name);
  return names;
}

void Graph::Backward(Expr root) {
  Require(Size(root) == 1, "backward from a non-scalar node");
  for (Node& n : nodes_)
    if (n.op != Op::kLeaf) n.grad.assign(n.rows * n.cols, 0.0);
  Grad(root.id)[0] += 1.0;

  for (int id = root.id; id >= 0; --id) {
    Node& n = nodes_[id];
    if (n.op == Op::kLeaf || n.op == Op::kConstant) continue;
    const double* g = n.grad.data();
    const std::size_t d = n.rows * n.cols;
    switch (n.op) {
      case Op::kLookup: {
        const std::size_t cols = n.param->value.cols();
        double* dst = n.param->grad.data.data() + n.index[0] * cols;
        for (std::size_t j = 0; j < d; ++j) dst[j] += g[j];
        break;
      }
      case Op::kMeanRows: {
        const std::size_t cols = n.param->value.cols();
        const double k = static_cast<double>(n.index.size());
        for (std::size_t r : n.index) {
          double* dst = n.param->grad.data.data() + r * cols;
          for (std::size_t j = 0; j < d; ++j) dst[j] += g[j] / k;
        }
        break;
      }
      case Op::kMatVec: {
        const Node& m = nodes_[n.inputs[0]];
        const std::size_t rows = m.rows, cols = m.cols;
        const double* w = Val(n.inputs[0]);
        const double* x = Val(n.inputs[1]);
        double* gw = Grad(n.inputs[0]);
        double* gx = Grad(n.inputs[1]);
        for (std::size_t r = 0; r < rows; ++r) {
          const double gr = g[r];
          if (gr == 0.0) continue;
          const double* wrow = w + r * cols;
          double* gwrow = gw + r * cols;
          for (std::size_t c = 0; c < cols; ++c) {
            gwrow[c] += gr * x[c];
            gx[c] += gr * wrow[c];
          }
        }
        break;
      }
      case Op::kAdd: {
        double* ga = Grad(n.inputs[0]);
        double* gb = Grad(n.inputs[1]);
        for (std::size_t i = 0; i < d; ++i) {
          ga[i] += g[i];
          gb[i] += g[i];
        }
        break;
      }
      case Op::kMul: {
        const double* a = Val(n.inputs[0]);
        const double* b = Val(n.inputs[1]);
        double* ga = Grad(n.inputs[0]);
        double* gb = Grad(n.inputs[1]);
        for (std::size_t i = 0; i < d; ++i) {
          ga[i] += g[i] * b[i];
          gb[i] += g[i] * a[i];
        }
        break;
      }
      case Op::kScale: {
        double* ga = Grad(n.inputs[0]);
        for (std::size_t i = 0; i < d; ++i) ga[i] += n.scalar * g[i];
        break;
      }
      case Op::kSigmoid: {
        double* ga = Grad(n.inputs[0]);
        for (std::size_t i = 0; i < d; ++i) {
          const double y = n.value[i];
          ga[i] += g[i] * y * (1.0 - y);
        }
        break;
      }
      case Op::kTanh: {
        double* ga = Grad(n.inputs[0]);
        for (std::size_t i = 0; i < d; ++i) {
          const double y = n.value[i];
          ga[i] += g[i] * (1.0 - y * y);
        }
        break;
      }
      case Op::kConcat: {
        std::size_t off = 0;
        for (int in : n.inputs) {
          const std::size_t len = nodes_[in].rows * nodes_[in].cols;
          double* gi = Grad(in);
          for (std::size_t j = 0; j < len; ++j) gi[j] += g[off + j];
          off += len;
        }
        break;
      }
      case Op::kSlice: {
        double* ga = Grad(n.inputs[0]) + n.index[0];
        for (std::size_t i = 0; i < d; ++i) ga[i] += g[i];
        break;
      }
      case Op::kDot: {
        const std::size_t len = nodes_[n.inputs[0]].rows * nodes_[n.inputs[0]].cols;
        const double* a = Val(n.inputs[0]);
        const double* b = Val(n.inputs[1]);
        double* ga = Grad(n.inputs[0]);
        double* gb = Grad(n.inputs[1]);
        for (std::size_t i = 0; i < len; ++i) {
          ga[i] += g[0] * b[i];
          gb[i] += g[0] * a[i];
        }
        break;
      }
      case Op::kSoftmax: {
        double inner = 0.0;
        for (std::size_t i = 0; i < d; ++i) inner += g[i] * n.value[i];
        double* ga = Grad(n.inputs[0]);
        for (std::size_t i = 0; i < d; ++i)
          ga[i] += n.value[i] * (g[i] - inner);
        break;
      }
      case Op::kWeightedSum: {
        const double* w = Val(n.inputs[0]);
        double* gw = Grad(n.inputs[0]);
        for (std::size_t k = 1; k < n.inputs.size(); ++k) {
          const double* x = Val(n.inputs[k]);
          double* gx = Grad(n.inputs[k]);
          double acc = 0.0;
          for (std::size_t j = 0; j < d; ++j) {
            acc += g[j] * x[j];
            gx[j] += w[k - 1] * g[j];
          }
          gw[k - 1] += acc;
        }
        break;
      }
      case Op::kMean: {
        const double k = static_cast<double>(n.inputs.size());
        for (int in : n.inputs) {
          double* gi = Grad(in);
          for (std::size_t j = 0; j < d; ++j) gi[j] += g[j] / k;
        }
        break;
      }
      case Op::kPickNll: {
        const Node& in = nodes_[n.inputs[0]];
        const std::size_t len = in.rows * in.cols;
        const std::vector<double> p = nn::Softmax({Val(n.inputs[0]), len});
        double* ga = Grad(n.inputs[0]);
        for (std::size_t i = 0; i < len; ++i)
          ga[i] += g[0] * (p[i] - (i == n.index[0] ? 1.0 : 0.0));
        break;
      }
      case Op::kLeaf:
      case Op::kConstant:
        break;
    }
  }
}

}  // namespace mlnorm::nn
