// grad_check.cc
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

#include "mlnorm/nn/grad_check.h"

#include <cmath>
#include <vector>

#include "mlnorm/errors.h"

namespace mlnorm::nn {

namespace {

double Evaluate(const LossBuilder& loss) {
  Graph g;
  const double v = g.Scalar(loss(g));
  if (!std::isfinite(v)) throw NumericError("grad check: non-finite loss");
  return v;
}

}  // namespace

GradCheckResult GradCheck(const LossBuilder& loss,
                          std::span<Parameter* const> params, double step,
                          double floor) {
  for (Parameter* p : params) p->ZeroGrad();
  {
    Graph g;
    Expr root = loss(g);
    if (!std::isfinite(g.Scalar(root)))
      throw NumericError("grad check: non-finite loss");
    g.Backward(root);
  }
  std::vector<std::vector<double>> analytic;
  for (Parameter* p : params) {
    analytic.push_back(p->grad.data);
    p->ZeroGrad();
  }

  GradCheckResult result;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double saved = p.value.data[i];
      p.value.data[i] = saved + step;
      const double plus = Evaluate(loss);
      p.value.data[i] = saved - step;
      const double minus = Evaluate(loss);
      p.value.data[i] = saved;
      const double numeric = (plus - minus) / (2.0 * step);
      const double a = analytic[k][i];
      const double err =
          std::abs(a - numeric) / std::max(std::abs(a) + std::abs(numeric), floor);
      ++result.coordinates;
      if (err > result.max_relative_error) {
        result.max_relative_error = err;
        result.worst_parameter = p.name;
        result.worst_index = i;
      }
    }
  }
  return result;
}

}  // namespace mlnorm::nn
