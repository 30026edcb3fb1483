// tensor.cc
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

#include "mlnorm/nn/tensor.h"

#include <cmath>
#include <functional>

namespace mlnorm::nn {

std::size_t ShapeSize(std::span<const std::size_t> shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

Tensor::Tensor(std::vector<std::size_t> dims)
    : shape(std::move(dims)), data(ShapeSize(shape), 0.0) {}

void Tensor::Fill(double v) { std::fill(data.begin(), data.end(), v); }

bool Tensor::AllFinite() const {
  for (double v : data)
    if (!std::isfinite(v)) return false;
  return true;
}

Parameter::Parameter(std::string param_name, std::vector<std::size_t> shape)
    : name(std::move(param_name)), value(shape), grad(shape) {}

void Parameter::ZeroGrad() const { grad.Fill(0.0); }

std::uint64_t Fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::mt19937_64 ParameterRng(std::uint64_t seed, const std::string& name) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(Fnv1a(name)),
                    static_cast<std::uint32_t>(Fnv1a(name) >> 32)};
  return std::mt19937_64(seq);
}

void GlorotInit(Parameter& p, std::uint64_t seed) {
  const double fan_out = static_cast<double>(p.value.rows());
  const double fan_in =
      p.value.shape.size() < 2 ? 1.0 : static_cast<double>(p.value.cols());
  const double a = std::sqrt(6.0 / (fan_in + fan_out));
  auto rng = ParameterRng(seed, p.name);
  std::uniform_real_distribution<double> dist(-a, a);
  for (double& v : p.value.data) v = dist(rng);
}

}  // namespace mlnorm::nn
