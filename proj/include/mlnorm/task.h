// task.h
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

#ifndef MLNORM_TASK_H_
#define MLNORM_TASK_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace mlnorm {

enum class Task { kNormalization, kLemmatization, kSegmentation };

std::string_view TaskName(Task task);
// Throws ConfigError on an unknown name.
Task ParseTask(std::string_view name);

// Target-side delimiter of higher-level units: words for normalization and
// lemmatization, morphemes for segmentation.
std::string DefaultBoundary(Task task);
std::size_t DefaultMaxEpochs(Task task);

}  // namespace mlnorm

#endif  // MLNORM_TASK_H_
