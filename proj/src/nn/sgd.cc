// sgd.cc
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

#include "mlnorm/nn/sgd.h"

#include <cmath>

#include "mlnorm/errors.h"

namespace mlnorm::nn {

void SgdConfig::Validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  if (clip_norm && !(*clip_norm > 0.0))
    throw ConfigError("clip norm must be > 0");
}

double GlobalGradNorm(std::span<Parameter* const> params) {
  double sq = 0.0;
  for (const Parameter* p : params)
    for (double v : p->grad.data) sq += v * v;
  return std::sqrt(sq);
}

double SgdStep(std::span<Parameter* const> params, const SgdConfig& cfg) {
  cfg.Validate();
  for (const Parameter* p : params)
    if (!p->grad.AllFinite())
      throw NumericError("non-finite gradient in parameter " + p->name);
  const double norm = GlobalGradNorm(params);
  double scale = cfg.learning_rate;
  if (cfg.clip_norm && norm > *cfg.clip_norm)
    scale *= *cfg.clip_norm / norm;
  for (Parameter* p : params) {
    double* v = p->value.data.data();
    const double* g = p->grad.data.data();
    for (std::size_t i = 0; i < p->value.size(); ++i) v[i] -= scale * g[i];
    p->ZeroGrad();
  }
  return norm;
}

}  // namespace mlnorm::nn
