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

#include "ipd/moran.h"

#include <algorithm>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

#include "ipd/engine.h"
#include "ipd/random.h"

namespace ipd {

MoranOutcome RunMoran(const MoranConfig& config) {
  if (config.population.size() < 2) {
    throw std::invalid_argument("a Moran population needs at least 2 individuals");
  }
  MatchConfig match;
  match.turns = config.turns;
  match.noise = config.noise;
  match.payoffs = config.payoffs;
  CheckMatchConfig(match);

  // Distinct types by name; the first spec seen for a name is used.
  std::vector<const StrategySpec*> types;
  std::vector<bool> deterministic;
  std::vector<int> individual_type;
  for (const StrategySpec& spec : config.population) {
    auto it = std::find_if(types.begin(), types.end(), [&spec](const StrategySpec* t) {
      return t->name == spec.name;
    });
    if (it == types.end()) {
      if (const auto v = Validate(spec); !v.empty()) {
        throw InvalidSpecError(
            fmt::format("invalid strategy '{}': {}", spec.name, v.front()));
      }
      types.push_back(&spec);
      deterministic.push_back(!Describe(spec).stochastic && config.noise == 0.0);
      it = types.end() - 1;
    }
    individual_type.push_back(static_cast<int>(it - types.begin()));
  }

  const auto fixated = [&individual_type] {
    return std::all_of(individual_type.begin(), individual_type.end(),
                       [&](int t) { return t == individual_type.front(); });
  };

  // Deterministic pairings give the same scores every step.
  std::map<std::pair<int, int>, std::pair<std::int64_t, std::int64_t>> cache;
  RandomStream selection(DeriveSeed(config.seed, {0x6d6f72616eULL}));
  const std::size_t n = individual_type.size();
  std::vector<double> fitness(n);

  MoranOutcome outcome;
  while (!fixated()) {
    if (outcome.steps >= config.max_steps) return outcome;
    std::fill(fitness.begin(), fitness.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const int ti = individual_type[i];
        const int tj = individual_type[j];
        std::pair<std::int64_t, std::int64_t> scores;
        const bool cacheable = deterministic[ti] && deterministic[tj];
        if (auto hit = cache.find({ti, tj}); cacheable && hit != cache.end()) {
          scores = hit->second;
        } else {
          match.seed = DeriveSeed(config.seed,
                                  {static_cast<std::uint64_t>(outcome.steps), i, j});
          const MatchOutcome o = PlayMatch(*types[ti], *types[tj], match);
          scores = {o.score_a, o.score_b};
          if (cacheable) {
            cache[{ti, tj}] = scores;
            cache[{tj, ti}] = {scores.second, scores.first};
          }
        }
        fitness[i] += static_cast<double>(scores.first);
        fitness[j] += static_cast<double>(scores.second);
      }
    }

    double total = 0.0;
    for (double f : fitness) total += f;
    std::size_t parent = n - 1;
    if (total <= 0.0) {
      parent = static_cast<std::size_t>(selection.UniformInt(static_cast<int>(n)));
    } else {
      const double u = selection.Uniform() * total;
      double cumulative = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        cumulative += fitness[i];
        if (u < cumulative) {
          parent = i;
          break;
        }
      }
    }
    const auto dead = static_cast<std::size_t>(selection.UniformInt(static_cast<int>(n)));
    individual_type[dead] = individual_type[parent];
    ++outcome.steps;
  }
  outcome.winner = types[individual_type.front()]->name;
  return outcome;
}

}  // namespace ipd
