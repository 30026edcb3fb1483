// sgd.h
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

#ifndef MLNORM_NN_SGD_H_
#define MLNORM_NN_SGD_H_

#include <cstdint>
#include <optional>
#include <span>

#include "mlnorm/nn/tensor.h"

namespace mlnorm::nn {

struct SgdConfig {
  double learning_rate = 0.1;
  std::optional<double> clip_norm = 5.0;
  std::uint64_t seed = 1;

  void Validate() const;
};

double GlobalGradNorm(std::span<Parameter* const> params);

// value -= lr * grad, with grads first rescaled so their global L2 norm is
// at most clip_norm. Grads are zeroed afterwards. Returns the norm before
// clipping. Throws NumericError naming the first parameter holding a
// non-finite gradient; in that case nothing is updated.
double SgdStep(std::span<Parameter* const> params, const SgdConfig& cfg);

}  // namespace mlnorm::nn

#endif  // MLNORM_NN_SGD_H_
