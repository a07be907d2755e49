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

#ifndef IPD_ENGINE_H_
#define IPD_ENGINE_H_

#include <cstdint>
#include <vector>

#include "ipd/action.h"
#include "ipd/random.h"
#include "ipd/strategy.h"
#include "ipd/strategy_spec.h"

namespace ipd {

struct MatchConfig {
  int turns = 200;
  // Probability that each executed action is the flip of the intended one.
  double noise = 0.0;
  // Seed of this match's random stream.
  std::uint64_t seed = 0;
  PayoffMatrix payoffs;
};

// Throws std::invalid_argument unless turns >= 1 and noise is in [0, 1].
void CheckMatchConfig(const MatchConfig& config);

struct MatchOutcome {
  std::int64_t score_a = 0;
  std::int64_t score_b = 0;
  // Executed moves, turn by turn.
  std::vector<Action> moves_a;
  std::vector<Action> moves_b;

  int turns() const { return static_cast<int>(moves_a.size()); }
  JointAction move(std::size_t t) const { return {moves_a[t], moves_b[t]}; }
  double per_turn_a() const { return static_cast<double>(score_a) / turns(); }
  double per_turn_b() const { return static_cast<double>(score_b) / turns(); }
  friend bool operator==(const MatchOutcome&, const MatchOutcome&) = default;
};

// Flips `intended` with probability `noise`. Draws from `rng` only when
// noise > 0.
Action ApplyNoise(Action intended, double noise, RandomStream& rng);

// Totals for a finished sequence of executed moves.
std::pair<std::int64_t, std::int64_t> ScoreMoves(std::span<const Action> a,
                                                 std::span<const Action> b,
                                                 const PayoffMatrix& payoffs);

// Plays live instances against each other. Each turn: A decides, B decides,
// noise is drawn for A then for B, and both executed actions are recorded in
// both histories. All draws come from one stream seeded by config.seed.
MatchOutcome PlayMatch(Strategy& a, Strategy& b, const MatchConfig& config);

// Fresh instances of both specs, then PlayMatch. Throws InvalidSpecError.
MatchOutcome PlayMatch(const StrategySpec& a, const StrategySpec& b,
                       const MatchConfig& config);

}  // namespace ipd

#endif  // IPD_ENGINE_H_
