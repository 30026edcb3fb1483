// checkpoint.h
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

#ifndef MLNORM_NN_CHECKPOINT_H_
#define MLNORM_NN_CHECKPOINT_H_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mlnorm/nn/tensor.h"

namespace mlnorm::nn {

// In-memory image of a checkpoint file. See docs/formats.md for the
// on-disk layout; values are written as hexadecimal floats so a
// write/read cycle reproduces every bit.
struct Checkpoint {
  std::string precision = "f64";
  std::map<std::string, std::string> meta;
  std::map<std::string, std::vector<std::string>> vocabularies;
  std::map<std::string, Tensor> tensors;
};

void WriteCheckpoint(std::ostream& out, const Checkpoint& ckpt);
Checkpoint ReadCheckpoint(std::istream& in);

void SaveCheckpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint LoadCheckpoint(const std::string& path);

// Escaping used for vocabulary symbols: backslash, space, tab and newline.
std::string EscapeToken(std::string_view s);
std::string UnescapeToken(std::string_view s);

}  // namespace mlnorm::nn

#endif  // MLNORM_NN_CHECKPOINT_H_
