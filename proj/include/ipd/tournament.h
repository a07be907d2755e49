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

#ifndef IPD_TOURNAMENT_H_
#define IPD_TOURNAMENT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ipd/action.h"
#include "ipd/strategy_spec.h"

namespace ipd {

struct TournamentConfig {
  std::vector<StrategySpec> roster;
  int turns = 200;
  double noise = 0.0;
  int repetitions = 100;
  std::uint64_t seed = 0;
  bool include_self_play = false;
  PayoffMatrix payoffs;
  // 0 picks the number of processors. Never affects results.
  int workers = 0;
};

// Throws std::invalid_argument: fewer than 2 players, repetitions < 1, bad
// turns/noise, duplicate names, or an invalid spec.
void CheckTournamentConfig(const TournamentConfig& config);

// Raw, exact tallies of a round robin. Per-turn means are derived on demand.
struct TournamentResult {
  std::vector<std::string> players;
  int turns = 0;
  double noise = 0.0;
  int repetitions = 0;
  std::uint64_t seed = 0;
  bool include_self_play = false;

  // [repetition][player]: payoff summed over the player's matches.
  std::vector<std::vector<std::int64_t>> total_payoff;
  // [repetition][player]: matches won (strictly higher total).
  std::vector<std::vector<int>> wins;
  // [repetition][player]: 1 is best.
  std::vector<std::vector<int>> ranks;
  // [i * n + j]: i's payoff against j summed over repetitions.
  std::vector<std::int64_t> pair_payoff;
  // [(i * n + j) * turns + t]: repetitions in which i cooperated with j on
  // turn t (0-based).
  std::vector<std::uint32_t> cooperation;

  std::size_t size() const { return players.size(); }
  int opponents() const;
  // Mean payoff per turn over the player's matches in one repetition.
  double Score(int repetition, std::size_t player) const;
  // i's mean per-turn payoff against j over all repetitions. Zero for i == j
  // without self-play.
  double PairwisePayoff(std::size_t i, std::size_t j) const;
  // Index of `name`, or -1.
  int IndexOf(std::string_view name) const;
};

TournamentResult RunTournament(const TournamentConfig& config);

struct Quantiles {
  double min = 0, q25 = 0, median = 0, q75 = 0, max = 0;
};
// Linear interpolation between order statistics. Empty input gives zeros.
Quantiles ComputeQuantiles(std::vector<double> values);

struct SummaryRow {
  std::string name;
  std::size_t index = 0;
  Quantiles score;
  Quantiles wins;
  Quantiles rank;
};

// Top `top_n` players by median score (descending), ties in roster order.
// Throws std::invalid_argument if top_n exceeds the roster.
std::vector<SummaryRow> Summarize(const TournamentResult& result,
                                  std::size_t top_n);
// All players sorted the same way.
std::vector<std::size_t> OrderByMedianScore(const TournamentResult& result);

// [opponent][turn]: fraction of repetitions in which `player` cooperated.
// Opponents are in roster order; the player's own row is included only with
// self-play. Throws std::out_of_range for an unknown player.
struct CooperationMap {
  std::vector<std::string> opponents;
  std::vector<std::vector<double>> rates;
};
CooperationMap CooperationRates(const TournamentResult& result,
                                 std::string_view player);

// Pairwise payoff matrix with rows and columns ordered by median score.
struct PayoffHeatmap {
  std::vector<std::string> players;
  std::vector<std::vector<double>> values;
};
PayoffHeatmap MakePayoffHeatmap(const TournamentResult& result);

}  // namespace ipd

#endif  // IPD_TOURNAMENT_H_
