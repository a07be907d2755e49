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

#include "ipd/kernels.h"

namespace ipd::kernels::scalar {

JointCounts CountJointActions(std::span<const Action> a,
                              std::span<const Action> b) {
  JointCounts counts;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const bool da = a[t] == kD;
    const bool db = b[t] == kD;
    if (!da && !db) {
      ++counts.cc;
    } else if (!da) {
      ++counts.cd;
    } else if (!db) {
      ++counts.dc;
    } else {
      ++counts.dd;
    }
  }
  return counts;
}

void AccumulateCooperation(std::span<const Action> moves,
                           std::span<std::uint32_t> counts) {
  for (std::size_t t = 0; t < moves.size(); ++t) {
    counts[t] += moves[t] == kC ? 1u : 0u;
  }
}

// Reduction order mirrors the AVX2 variant: four lane accumulators over the
// first 16 inputs, combined as (l0 + l1) + (l2 + l3), then the 17th input,
// then the bias. Hidden units are processed in order.
double DenseReluOutput(std::span<const double> weights,
                       std::span<const double> bias,
                       std::span<const double> out,
                       std::span<const double, kAnnInputs> x) {
  double total = 0.0;
  for (std::size_t j = 0; j < bias.size(); ++j) {
    const double* w = weights.data() + j * kAnnInputs;
    double lane[4] = {w[0] * x[0], w[1] * x[1], w[2] * x[2], w[3] * x[3]};
    for (std::size_t k = 4; k < 16; k += 4) {
      for (std::size_t l = 0; l < 4; ++l) {
        const double p = w[k + l] * x[k + l];
        lane[l] = lane[l] + p;
      }
    }
    double s = (lane[0] + lane[1]) + (lane[2] + lane[3]);
    const double tail = w[16] * x[16];
    s = s + tail;
    s = s + bias[j];
    const double h = s > 0.0 ? s : 0.0;
    const double contribution = out[j] * h;
    total = total + contribution;
  }
  return total;
}

}  // namespace ipd::kernels::scalar
