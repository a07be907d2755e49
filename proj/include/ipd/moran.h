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

// Birth-death Moran process over a well-mixed population of IPD players.

#ifndef IPD_MORAN_H_
#define IPD_MORAN_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ipd/action.h"
#include "ipd/strategy_spec.h"

namespace ipd {

struct MoranConfig {
  // One entry per individual; repeat a spec for multiplicity. Individuals
  // with the same name count as the same type.
  std::vector<StrategySpec> population;
  int turns = 200;
  double noise = 0.0;
  std::uint64_t seed = 0;
  int max_steps = 10000;
  PayoffMatrix payoffs;
};

struct MoranOutcome {
  // Name of the type that took over; nullopt on timeout.
  std::optional<std::string> winner;
  int steps = 0;
  bool timed_out() const { return !winner.has_value(); }
};

// Each step: every pair of individuals plays one match, fitness is total
// payoff, one individual is chosen to reproduce with probability
// proportional to fitness (uniformly if all fitness is zero), one is chosen
// uniformly to die, and the dead individual is replaced by a clone of the
// reproducer. Stops when one type remains or after max_steps steps.
// Throws std::invalid_argument if the population has fewer than 2
// individuals or a spec is invalid.
MoranOutcome RunMoran(const MoranConfig& config);

}  // namespace ipd

#endif  // IPD_MORAN_H_
