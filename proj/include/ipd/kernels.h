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

// Data-parallel inner loops of the tournament core. Every kernel has a scalar
// reference in kernels::scalar and, on x86-64, an AVX2 variant in
// kernels::avx2. The public entry points dispatch at runtime to the widest
// variant the CPU supports. All variants are bit-identical: floating point
// kernels fix their reduction order so the scalar path reproduces the vector
// lanes exactly.

#ifndef IPD_KERNELS_H_
#define IPD_KERNELS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "ipd/action.h"

namespace ipd::kernels {

// Number of rounds with each joint action.
struct JointCounts {
  std::int64_t cc = 0;
  std::int64_t cd = 0;
  std::int64_t dc = 0;
  std::int64_t dd = 0;
  friend bool operator==(const JointCounts&, const JointCounts&) = default;
};

// Number of inputs of the single-hidden-layer network.
inline constexpr std::size_t kAnnInputs = 17;

struct KernelTable {
  std::string_view name;
  // a and b have equal length.
  JointCounts (*count_joint_actions)(std::span<const Action> a,
                                     std::span<const Action> b);
  // counts[t] += (moves[t] == C); counts.size() >= moves.size().
  void (*accumulate_cooperation)(std::span<const Action> moves,
                                 std::span<std::uint32_t> counts);
  // sum_j out[j] * relu(bias[j] + dot(weights[j*17 .. j*17+16], x)).
  double (*dense_relu_output)(std::span<const double> weights,
                              std::span<const double> bias,
                              std::span<const double> out,
                              std::span<const double, kAnnInputs> x);
};

const KernelTable& ScalarTable();
// nullptr when not compiled in or not supported by this CPU.
const KernelTable* Avx2Table();

// The table chosen at first use. Setting IPD_FORCE_SCALAR=1 in the
// environment pins the scalar path.
const KernelTable& Active();

inline JointCounts CountJointActions(std::span<const Action> a,
                                     std::span<const Action> b) {
  return Active().count_joint_actions(a, b);
}
inline void AccumulateCooperation(std::span<const Action> moves,
                                  std::span<std::uint32_t> counts) {
  Active().accumulate_cooperation(moves, counts);
}
inline double DenseReluOutput(std::span<const double> weights,
                              std::span<const double> bias,
                              std::span<const double> out,
                              std::span<const double, kAnnInputs> x) {
  return Active().dense_relu_output(weights, bias, out, x);
}

namespace scalar {
JointCounts CountJointActions(std::span<const Action> a,
                              std::span<const Action> b);
void AccumulateCooperation(std::span<const Action> moves,
                           std::span<std::uint32_t> counts);
double DenseReluOutput(std::span<const double> weights,
                       std::span<const double> bias,
                       std::span<const double> out,
                       std::span<const double, kAnnInputs> x);
}  // namespace scalar

}  // namespace ipd::kernels

#endif  // IPD_KERNELS_H_
