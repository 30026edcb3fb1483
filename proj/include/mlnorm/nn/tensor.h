// tensor.h
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

#ifndef MLNORM_NN_TENSOR_H_
#define MLNORM_NN_TENSOR_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace mlnorm::nn {

// Dense row-major array. data.size() == product of shape.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> dims);

  std::size_t size() const { return data.size(); }
  std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
  // Trailing extent; 1 for vectors.
  std::size_t cols() const { return shape.size() < 2 ? 1 : shape[1]; }

  void Fill(double v);
  bool AllFinite() const;
};

std::size_t ShapeSize(std::span<const std::size_t> shape);

// A learned weight with its gradient accumulator. The accumulator is
// mutable so that graphs built over a const model can still run backward;
// forward computations never read or write it.
struct Parameter {
  std::string name;
  Tensor value;
  mutable Tensor grad;

  Parameter() = default;
  Parameter(std::string param_name, std::vector<std::size_t> shape);

  void ZeroGrad() const;
};

// Glorot-uniform init with a = sqrt(6 / (fanIn + fanOut)). For a vector
// fanIn = 1. The generator is derived from (seed, name) so a parameter gets
// the same values regardless of which other parameters exist.
void GlorotInit(Parameter& p, std::uint64_t seed);
std::mt19937_64 ParameterRng(std::uint64_t seed, const std::string& name);

std::uint64_t Fnv1a(std::string_view bytes,
                    std::uint64_t h = 14695981039346656037ull);

}  // namespace mlnorm::nn

#endif  // MLNORM_NN_TENSOR_H_
