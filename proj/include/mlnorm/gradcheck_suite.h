// gradcheck_suite.h
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

#ifndef MLNORM_GRADCHECK_SUITE_H_
#define MLNORM_GRADCHECK_SUITE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "mlnorm/nn/grad_check.h"

namespace mlnorm {

struct GradCheckCase {
  std::string name;
  nn::GradCheckResult result;
  bool passed = false;
};

// Finite-difference checks of every differentiable graph operation, an
// LSTM step, and the full training losses of every model variant on tiny
// dimensions (combined loss with alpha = 0.2).
std::vector<GradCheckCase> RunGradCheckSuite(std::uint64_t seed = 7,
                                             double tolerance = 1e-4);

}  // namespace mlnorm

#endif  // MLNORM_GRADCHECK_SUITE_H_
