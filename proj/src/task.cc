// task.cc
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

#include "mlnorm/task.h"

#include "mlnorm/errors.h"

namespace mlnorm {

std::string_view TaskName(Task task) {
  switch (task) {
    case Task::kNormalization: return "normalization";
    case Task::kLemmatization: return "lemmatization";
    case Task::kSegmentation: return "segmentation";
  }
  return "?";
}

Task ParseTask(std::string_view name) {
  if (name == "normalization") return Task::kNormalization;
  if (name == "lemmatization") return Task::kLemmatization;
  if (name == "segmentation") return Task::kSegmentation;
  throw ConfigError("unknown task '" + std::string(name) +
                    "' (expected normalization, lemmatization or segmentation)");
}

std::string DefaultBoundary(Task task) {
  return task == Task::kSegmentation ? "|" : " ";
}

std::size_t DefaultMaxEpochs(Task task) {
  return task == Task::kNormalization ? 40 : 30;
}

}  // namespace mlnorm
