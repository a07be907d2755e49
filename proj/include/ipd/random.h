// Copyright 2026 The IPD Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IPD_RANDOM_H_
#define IPD_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ipd {

// Mixes a root seed with a path of identifiers (repetition, player indices,
// generation, ...) into an independent stream seed. The result depends only
// on the arguments, never on scheduling.
std::uint64_t DeriveSeed(std::uint64_t root,
                         std::initializer_list<std::uint64_t> path);

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  // True with probability p; p <= 0 is never and p >= 1 is always true.
  bool Bernoulli(double p) { return Uniform() < p; }
  // Uniform integer in [0, n).
  int UniformInt(int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(engine_);
  }
  double Normal(double mean, double sigma) {
    return std::normal_distribution<double>(mean, sigma)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ipd

#endif  // IPD_RANDOM_H_
