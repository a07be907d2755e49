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

#include "ipd/tournament.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "ipd/engine.h"
#include "ipd/kernels.h"
#include "ipd/parallel.h"

namespace ipd {

void CheckTournamentConfig(const TournamentConfig& config) {
  if (config.roster.size() < 2) {
    throw std::invalid_argument("a tournament needs at least 2 players");
  }
  if (config.repetitions < 1) {
    throw std::invalid_argument("repetitions must be >= 1");
  }
  MatchConfig match;
  match.turns = config.turns;
  match.noise = config.noise;
  CheckMatchConfig(match);
  std::set<std::string> names;
  for (const StrategySpec& spec : config.roster) {
    if (!names.insert(spec.name).second) {
      throw std::invalid_argument(
          fmt::format("duplicate player name '{}'", spec.name));
    }
    if (const auto v = Validate(spec); !v.empty()) {
      throw InvalidSpecError(
          fmt::format("invalid strategy '{}': {}", spec.name, v.front()));
    }
  }
}

int TournamentResult::opponents() const {
  return static_cast<int>(players.size()) - (include_self_play ? 0 : 1);
}

double TournamentResult::Score(int repetition, std::size_t player) const {
  return static_cast<double>(total_payoff[repetition][player]) /
         (static_cast<double>(turns) * opponents());
}

double TournamentResult::PairwisePayoff(std::size_t i, std::size_t j) const {
  return static_cast<double>(pair_payoff[i * size() + j]) /
         (static_cast<double>(turns) * repetitions);
}

int TournamentResult::IndexOf(std::string_view name) const {
  const auto it = std::find(players.begin(), players.end(), name);
  return it == players.end() ? -1 : static_cast<int>(it - players.begin());
}

TournamentResult RunTournament(const TournamentConfig& config) {
  CheckTournamentConfig(config);
  const std::size_t n = config.roster.size();
  const auto turns = static_cast<std::size_t>(config.turns);

  TournamentResult result;
  for (const StrategySpec& spec : config.roster) result.players.push_back(spec.name);
  result.turns = config.turns;
  result.noise = config.noise;
  result.repetitions = config.repetitions;
  result.seed = config.seed;
  result.include_self_play = config.include_self_play;
  result.pair_payoff.assign(n * n, 0);
  result.cooperation.assign(n * n * turns, 0);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = config.include_self_play ? i : i + 1; j < n; ++j) {
      pairs.emplace_back(i, j);
    }
  }

  std::vector<MatchOutcome> outcomes(pairs.size());
  for (int rep = 0; rep < config.repetitions; ++rep) {
    ParallelFor(pairs.size(), config.workers, [&](std::size_t m) {
      const auto [i, j] = pairs[m];
      MatchConfig match;
      match.turns = config.turns;
      match.noise = config.noise;
      match.payoffs = config.payoffs;
      match.seed = DeriveSeed(config.seed, {static_cast<std::uint64_t>(rep), i, j});
      outcomes[m] = PlayMatch(config.roster[i], config.roster[j], match);
    });

    std::vector<std::int64_t> totals(n, 0);
    std::vector<int> wins(n, 0);
    for (std::size_t m = 0; m < pairs.size(); ++m) {
      const auto [i, j] = pairs[m];
      const MatchOutcome& o = outcomes[m];
      const std::span<std::uint32_t> coop(result.cooperation);
      totals[i] += o.score_a;
      result.pair_payoff[i * n + j] += o.score_a;
      kernels::AccumulateCooperation(o.moves_a, coop.subspan((i * n + j) * turns, turns));
      if (i == j) continue;
      totals[j] += o.score_b;
      result.pair_payoff[j * n + i] += o.score_b;
      kernels::AccumulateCooperation(o.moves_b, coop.subspan((j * n + i) * turns, turns));
      if (o.score_a > o.score_b) ++wins[i];
      if (o.score_b > o.score_a) ++wins[j];
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return totals[a] > totals[b];
    });
    std::vector<int> ranks(n);
    for (std::size_t r = 0; r < n; ++r) ranks[order[r]] = static_cast<int>(r) + 1;

    result.total_payoff.push_back(std::move(totals));
    result.wins.push_back(std::move(wins));
    result.ranks.push_back(std::move(ranks));
  }
  return result;
}

Quantiles ComputeQuantiles(std::vector<double> values) {
  Quantiles q;
  if (values.empty()) return q;
  std::sort(values.begin(), values.end());
  const auto at = [&values](double p) {
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0) return values[lo];
    return values[lo] + (values[hi] - values[lo]) * frac;
  };
  q.min = values.front();
  q.q25 = at(0.25);
  q.median = at(0.5);
  q.q75 = at(0.75);
  q.max = values.back();
  return q;
}

namespace {

template <typename Get>
Quantiles PlayerQuantiles(const TournamentResult& result, std::size_t player,
                          Get get) {
  std::vector<double> values;
  values.reserve(result.repetitions);
  for (int rep = 0; rep < result.repetitions; ++rep) {
    values.push_back(get(rep, player));
  }
  return ComputeQuantiles(std::move(values));
}

Quantiles ScoreQuantiles(const TournamentResult& r, std::size_t p) {
  return PlayerQuantiles(r, p, [&r](int rep, std::size_t i) { return r.Score(rep, i); });
}

}  // namespace

std::vector<std::size_t> OrderByMedianScore(const TournamentResult& result) {
  std::vector<double> medians(result.size());
  for (std::size_t p = 0; p < result.size(); ++p) {
    medians[p] = ScoreQuantiles(result, p).median;
  }
  std::vector<std::size_t> order(result.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return medians[a] > medians[b];
  });
  return order;
}

std::vector<SummaryRow> Summarize(const TournamentResult& result,
                                  std::size_t top_n) {
  if (top_n > result.size()) {
    throw std::invalid_argument(fmt::format(
        "top_n {} exceeds roster size {}", top_n, result.size()));
  }
  std::vector<SummaryRow> rows;
  const auto order = OrderByMedianScore(result);
  for (std::size_t k = 0; k < top_n; ++k) {
    const std::size_t p = order[k];
    SummaryRow row;
    row.name = result.players[p];
    row.index = p;
    row.score = ScoreQuantiles(result, p);
    row.wins = PlayerQuantiles(result, p, [&result](int rep, std::size_t i) {
      return static_cast<double>(result.wins[rep][i]);
    });
    row.rank = PlayerQuantiles(result, p, [&result](int rep, std::size_t i) {
      return static_cast<double>(result.ranks[rep][i]);
    });
    rows.push_back(std::move(row));
  }
  return rows;
}

CooperationMap CooperationRates(const TournamentResult& result,
                                std::string_view player) {
  const int index = result.IndexOf(player);
  if (index < 0) {
    throw std::out_of_range(fmt::format("unknown player '{}'", player));
  }
  const std::size_t n = result.size();
  const auto turns = static_cast<std::size_t>(result.turns);
  const auto i = static_cast<std::size_t>(index);
  CooperationMap map;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i && !result.include_self_play) continue;
    map.opponents.push_back(result.players[j]);
    std::vector<double> row(turns);
    for (std::size_t t = 0; t < turns; ++t) {
      row[t] = static_cast<double>(result.cooperation[(i * n + j) * turns + t]) /
               result.repetitions;
    }
    map.rates.push_back(std::move(row));
  }
  return map;
}

PayoffHeatmap MakePayoffHeatmap(const TournamentResult& result) {
  if (result.size() == 0) throw std::invalid_argument("empty result");
  const auto order = OrderByMedianScore(result);
  PayoffHeatmap map;
  for (std::size_t i : order) {
    map.players.push_back(result.players[i]);
    std::vector<double> row;
    for (std::size_t j : order) row.push_back(result.PairwisePayoff(i, j));
    map.values.push_back(std::move(row));
  }
  return map;
}

}  // namespace ipd
