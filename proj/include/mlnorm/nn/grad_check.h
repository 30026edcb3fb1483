// grad_check.h
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

#ifndef MLNORM_NN_GRAD_CHECK_H_
#define MLNORM_NN_GRAD_CHECK_H_

#include <functional>
#include <span>
#include <string>

#include "mlnorm/nn/graph.h"
#include "mlnorm/nn/tensor.h"

namespace mlnorm::nn {

// Builds a scalar loss into the given graph.
using LossBuilder = std::function<Expr(Graph&)>;

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  std::size_t coordinates = 0;
};

// Compares the analytic gradient of every coordinate of `params` with the
// central difference (L(p+h) - L(p-h)) / 2h. The relative error of one
// coordinate is |a - n| / max(|a| + |n|, floor); the floor keeps
// coordinates whose true gradient is ~0 from reporting pure round-off.
// Existing gradients in `params` are cleared.
GradCheckResult GradCheck(const LossBuilder& loss,
                          std::span<Parameter* const> params,
                          double step = 1e-4, double floor = 1e-3);

}  // namespace mlnorm::nn

#endif  // MLNORM_NN_GRAD_CHECK_H_
