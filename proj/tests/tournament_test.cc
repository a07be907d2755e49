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

#include "doctest.h"
#include "ipd/corpus.h"
#include "test_util.h"

namespace ipd {
namespace {

using testing::Named;

TournamentConfig ThreePlayers() {
  TournamentConfig config;
  config.roster = {Named("Cooperator"), Named("Defector"), Named("Tit For Tat")};
  config.repetitions = 3;
  return config;
}

TEST_CASE("three-player tournament matches the hand computation") {
  const TournamentResult r = RunTournament(ThreePlayers());
  // Match totals over 200 turns: C-D 0/1000, C-TFT 600/600, D-TFT 204/199.
  const double turns = 200, opponents = 2;
  const double expected[] = {(0 + 600) / (turns * opponents),
                             (1000 + 204) / (turns * opponents),
                             (600 + 199) / (turns * opponents)};
  CHECK(expected[0] == 1.5);
  CHECK(expected[1] == 3.01);
  CHECK(expected[2] == 1.9975);
  for (int rep = 0; rep < 3; ++rep) {
    for (std::size_t p = 0; p < 3; ++p) CHECK(r.Score(rep, p) == expected[p]);
    CHECK(r.wins[rep] == std::vector<int>{0, 2, 0});
    CHECK(r.ranks[rep] == std::vector<int>{3, 1, 2});
  }
  CHECK(r.PairwisePayoff(1, 0) == 5.0);
  CHECK(r.PairwisePayoff(0, 1) == 0.0);
  CHECK(r.PairwisePayoff(2, 1) == 0.995);
  CHECK(r.PairwisePayoff(0, 0) == 0.0);
  const CooperationMap coop = CooperationRates(r, "Tit For Tat");
  CHECK(coop.opponents == std::vector<std::string>{"Cooperator", "Defector"});
  CHECK(coop.rates[1][0] == 1.0);
  CHECK(coop.rates[1][1] == 0.0);
  CHECK(std::all_of(coop.rates[0].begin(), coop.rates[0].end(),
                    [](double v) { return v == 1.0; }));
}

TEST_CASE("results do not depend on the worker count") {
  TournamentConfig config;
  config.roster = Registry::Default().DefaultRoster();
  config.repetitions = 4;
  config.noise = 0.05;
  config.seed = 11;
  config.turns = 50;
  config.workers = 1;
  const TournamentResult serial = RunTournament(config);
  for (int workers : {2, 3, 8}) {
    config.workers = workers;
    const TournamentResult parallel = RunTournament(config);
    CHECK(parallel.total_payoff == serial.total_payoff);
    CHECK(parallel.wins == serial.wins);
    CHECK(parallel.ranks == serial.ranks);
    CHECK(parallel.pair_payoff == serial.pair_payoff);
    CHECK(parallel.cooperation == serial.cooperation);
  }
  config.seed = 12;
  CHECK(RunTournament(config).total_payoff != serial.total_payoff);
}

TEST_CASE("self-play adds one opponent") {
  TournamentConfig config = ThreePlayers();
  config.include_self_play = true;
  config.repetitions = 1;
  const TournamentResult r = RunTournament(config);
  CHECK(r.opponents() == 3);
  // TFT: 600 + 199 + 600 against itself.
  CHECK(r.Score(0, 2) == (600.0 + 199 + 600) / 600);
  CHECK(r.PairwisePayoff(2, 2) == 3.0);
  // Self-play is never a win.
  CHECK(r.wins[0] == std::vector<int>{0, 2, 0});
}

TEST_CASE("ties in total payoff rank by roster order") {
  TournamentConfig config;
  config.roster = {Named("Tit For Tat"), Named("Cooperator"), Named("Grudger")};
  config.repetitions = 1;
  const TournamentResult r = RunTournament(config);
  CHECK(r.ranks[0] == std::vector<int>{1, 2, 3});
  CHECK(r.wins[0] == std::vector<int>{0, 0, 0});
}

TEST_CASE("quantiles use linear interpolation") {
  // Hand computed: positions p * (n - 1) into the sorted sample.
  const Quantiles q = ComputeQuantiles({4, 1, 3, 2});
  CHECK(q.min == 1);
  CHECK(q.q25 == 1.75);
  CHECK(q.median == 2.5);
  CHECK(q.q75 == 3.25);
  CHECK(q.max == 4);
  const Quantiles single = ComputeQuantiles({7});
  CHECK(single.q25 == 7);
  CHECK(single.median == 7);
  const Quantiles five = ComputeQuantiles({5, 1, 4, 2, 3});
  CHECK(five.q25 == 2);
  CHECK(five.median == 3);
  CHECK(five.q75 == 4);
}

TEST_CASE("summaries and errors") {
  const TournamentResult r = RunTournament(ThreePlayers());
  const auto rows = Summarize(r, 3);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].name == "Defector");
  CHECK(rows[1].name == "Tit For Tat");
  CHECK(rows[2].name == "Cooperator");
  CHECK(rows[0].score.median == 3.01);
  CHECK(rows[0].wins.median == 2);
  CHECK(rows[2].rank.max == 3);
  CHECK(Summarize(r, 1).size() == 1);
  CHECK_THROWS_AS(Summarize(r, 4), std::invalid_argument);
  CHECK_THROWS_AS(CooperationRates(r, "Nobody"), std::out_of_range);
  const PayoffHeatmap map = MakePayoffHeatmap(r);
  CHECK(map.players == std::vector<std::string>{"Defector", "Tit For Tat", "Cooperator"});
  CHECK(map.values[0][2] == 5.0);

  TournamentConfig bad = ThreePlayers();
  bad.roster.pop_back();
  bad.roster.pop_back();
  CHECK_THROWS_AS(RunTournament(bad), std::invalid_argument);
  bad = ThreePlayers();
  bad.roster[2] = bad.roster[0];
  CHECK_THROWS_AS(RunTournament(bad), std::invalid_argument);
  bad = ThreePlayers();
  bad.repetitions = 0;
  CHECK_THROWS_AS(RunTournament(bad), std::invalid_argument);
  bad = ThreePlayers();
  bad.roster[0].body = ClassicSpec{"nonsense", 0};
  CHECK_THROWS_AS(RunTournament(bad), InvalidSpecError);
}

TEST_CASE("nice deterministic strategies cooperate fully with each other") {
  TournamentConfig config;
  const Registry& reg = Registry::Default();
  for (std::size_t i = 0; i < reg.specs().size(); ++i) {
    const StrategyDescriptor& d = reg.descriptors()[i];
    if (d.nice && !d.stochastic) config.roster.push_back(reg.specs()[i]);
  }
  REQUIRE(config.roster.size() >= 5);
  config.repetitions = 1;
  const TournamentResult r = RunTournament(config);
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (i != j) CHECK(r.PairwisePayoff(i, j) == 3.0);
    }
  }
}

}  // namespace
}  // namespace ipd
