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

#include "ipd/engine.h"

#include <stdexcept>
#include <tuple>

#include "ipd/kernels.h"

namespace ipd {

void CheckMatchConfig(const MatchConfig& config) {
  if (config.turns < 1) throw std::invalid_argument("turns must be >= 1");
  if (!(config.noise >= 0.0 && config.noise <= 1.0)) {
    throw std::invalid_argument("noise must be in [0, 1]");
  }
}

Action ApplyNoise(Action intended, double noise, RandomStream& rng) {
  if (noise <= 0.0) return intended;
  return rng.Bernoulli(noise) ? Flip(intended) : intended;
}

std::pair<std::int64_t, std::int64_t> ScoreMoves(std::span<const Action> a,
                                                 std::span<const Action> b,
                                                 const PayoffMatrix& payoffs) {
  const kernels::JointCounts n = kernels::CountJointActions(a, b);
  const std::int64_t score_a = n.cc * payoffs.reward + n.cd * payoffs.sucker +
                               n.dc * payoffs.temptation +
                               n.dd * payoffs.punishment;
  const std::int64_t score_b = n.cc * payoffs.reward +
                               n.cd * payoffs.temptation +
                               n.dc * payoffs.sucker + n.dd * payoffs.punishment;
  return {score_a, score_b};
}

MatchOutcome PlayMatch(Strategy& a, Strategy& b, const MatchConfig& config) {
  CheckMatchConfig(config);
  RandomStream rng(config.seed);
  const auto turns = static_cast<std::size_t>(config.turns);
  History history_a;
  History history_b;
  history_a.Reserve(turns);
  history_b.Reserve(turns);
  for (std::size_t t = 0; t < turns; ++t) {
    const Action intended_a = a.Decide(history_a, rng);
    const Action intended_b = b.Decide(history_b, rng);
    const Action played_a = ApplyNoise(intended_a, config.noise, rng);
    const Action played_b = ApplyNoise(intended_b, config.noise, rng);
    history_a.Record(played_a, played_b);
    history_b.Record(played_b, played_a);
  }
  MatchOutcome outcome;
  outcome.moves_a.assign(history_a.own().begin(), history_a.own().end());
  outcome.moves_b.assign(history_b.own().begin(), history_b.own().end());
  std::tie(outcome.score_a, outcome.score_b) =
      ScoreMoves(outcome.moves_a, outcome.moves_b, config.payoffs);
  return outcome;
}

MatchOutcome PlayMatch(const StrategySpec& a, const StrategySpec& b,
                       const MatchConfig& config) {
  auto player_a = Instantiate(a);
  auto player_b = Instantiate(b);
  return PlayMatch(*player_a, *player_b, config);
}

}  // namespace ipd
