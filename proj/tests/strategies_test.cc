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

#include <algorithm>
#include <set>

#include "doctest.h"
#include "ipd/archetypes.h"
#include "ipd/classics.h"
#include "ipd/corpus.h"
#include "ipd/engine.h"
#include "ipd/strategy_spec.h"
#include "test_util.h"

namespace ipd {
namespace {

using testing::Classic;
using testing::MakeHistory;
using testing::Named;
using testing::PlayAgainstScript;
using testing::RandomActions;

Action Decide(const StrategySpec& spec, const History& h, std::uint64_t seed = 1) {
  auto s = Instantiate(spec);
  RandomStream rng(seed);
  // Replay so stateful strategies see the same sequence they would in a match.
  History partial;
  for (std::size_t t = 0; t < h.size(); ++t) {
    s->Decide(partial, rng);
    partial.Record(h.own()[t], h.opponent()[t]);
  }
  return s->Decide(partial, rng);
}

TEST_CASE("classic decisions") {
  CHECK(Decide(Named("Tit For Tat"), History{}) == kC);
  CHECK(Decide(Named("Tit For Tat"), MakeHistory("CC", "CD")) == kD);
  CHECK(Decide(Named("Grudger"), MakeHistory("CCCC", "CDCC")) == kD);
  CHECK(Decide(Named("Grudger"), MakeHistory("CCCC", "CCCC")) == kC);
  CHECK(Decide(Named("Win-Stay Lose-Shift"), MakeHistory("C", "C")) == kC);
  CHECK(Decide(Named("Win-Stay Lose-Shift"), MakeHistory("C", "D")) == kD);
  CHECK(Decide(Named("Win-Stay Lose-Shift"), MakeHistory("D", "D")) == kC);
  CHECK(Decide(Named("Tit For 2 Tats"), MakeHistory("CC", "CD")) == kC);
  CHECK(Decide(Named("Tit For 2 Tats"), MakeHistory("CC", "DD")) == kD);
  CHECK(Decide(Named("Two Tits For Tat"), MakeHistory("CC", "DC")) == kD);
  CHECK(Decide(Named("Suspicious Tit For Tat"), History{}) == kD);
  CHECK(Decide(Named("Alternator"), MakeHistory("C", "C")) == kD);
  CHECK(Decide(Named("Spiteful Tit For Tat"), MakeHistory("CCD", "DCC")) == kC);
  CHECK(Decide(Named("Spiteful Tit For Tat"), MakeHistory("CCDD", "CDDC")) == kD);
  CHECK(Decide(Named("Spiteful Tit For Tat"), MakeHistory("CCDDDC", "CDDCCC")) == kD);
}

TEST_CASE("handshake conditions on the opening") {
  const StrategySpec hs = Named("Handshake");
  CHECK(Decide(hs, History{}) == kC);
  CHECK(Decide(hs, MakeHistory("C", "C")) == kD);
  CHECK(Decide(hs, MakeHistory("CD", "CD")) == kC);
  CHECK(Decide(hs, MakeHistory("CDC", "CDC")) == kC);
  CHECK(Decide(hs, MakeHistory("CD", "CC")) == kD);
  CHECK(Decide(hs, MakeHistory("CDD", "CCC")) == kD);
}

TEST_CASE("the corpus covers the required strategies") {
  const Registry& r = Registry::Default();
  CHECK(r.specs().size() >= 30);
  for (const char* name :
       {"Cooperator", "Defector", "Tit For Tat", "Tit For 2 Tats", "Two Tits For Tat",
        "Grudger", "Win-Stay Lose-Shift", "Random: 0.5", "GTFT: 0.33",
        "Spiteful Tit For Tat", "Omega TFT", "ZD-Extort-2", "ZD-GTFT-2", "Handshake",
        "CollectiveStrategy", "Aggravater", "Alternator", "Cycler CCD", "Prober",
        "Forgiving Tit For Tat", "Stochastic WSLS: 0.05", "PSO Gambler Mem1",
        "Meta Majority", "Meta Winner"}) {
    CHECK_MESSAGE(r.Find(name) != nullptr, name);
  }
  const StrategyDescriptor* tft = r.Describe("Tit For Tat");
  REQUIRE(tft != nullptr);
  CHECK_FALSE(tft->stochastic);
  CHECK(tft->memory_depth == 1);
  CHECK(r.Describe("Defector")->memory_depth == 0);
  CHECK(r.Describe("ZD-GTFT-2")->stochastic);
  CHECK(r.Describe("Grudger")->memory_depth == std::nullopt);
  CHECK(r.Describe("PSO Gambler Mem1")->trained);
  std::set<std::string> names;
  for (const StrategySpec& s : r.specs()) names.insert(s.name);
  CHECK(names.size() == r.specs().size());
  for (const StrategySpec& s : r.DefaultRoster()) {
    CHECK_FALSE(std::holds_alternative<MetaSpec>(s.body));
  }
  CHECK(r.NearestNames("Tit for tat", 1) == std::vector<std::string>{"Tit For Tat"});
  CHECK(r.Hash() == Registry::Default().Hash());
  CHECK(r.ToCsv().starts_with("name,stochastic,memory_depth,trained\n"));
  CHECK_THROWS_AS(Registry({Named("Defector"), Named("Defector")}), std::invalid_argument);
}

TEST_CASE("every corpus strategy is valid and carries no state between matches") {
  MatchConfig config;
  config.turns = 60;
  config.seed = 5;
  const StrategySpec opponent = Named("Random: 0.5");
  for (const StrategySpec& spec : Registry::Default().specs()) {
    CAPTURE(spec.name);
    CHECK(Validate(spec).empty());
    auto a = Instantiate(spec);
    auto b = Instantiate(opponent);
    const MatchOutcome first = PlayMatch(*a, *b, config);
    auto b2 = Instantiate(opponent);
    const MatchOutcome again = PlayMatch(*Instantiate(spec), *b2, config);
    CHECK(first == again);
  }
}

TEST_CASE("deterministic strategies ignore the random stream") {
  RandomStream script_rng(6);
  const auto script = RandomActions(80, script_rng);
  for (const StrategySpec& spec : Registry::Default().specs()) {
    if (Describe(spec).stochastic) continue;
    CAPTURE(spec.name);
    RandomStream r1(1), r2(999);
    auto a = Instantiate(spec);
    auto b = Instantiate(spec);
    CHECK(PlayAgainstScript(*a, script, r1) == PlayAgainstScript(*b, script, r2));
  }
}

TEST_CASE("Grudger agrees with Grim as a LookerUp") {
  const LookerUpSpec grim{{0, 1, 1}, {kC, kD, kD, kD}};
  RandomStream rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    // Mostly cooperative scripts so both branches are exercised.
    std::vector<Action> script(1 + rng.UniformInt(60), kC);
    for (Action& a : script) a = rng.Bernoulli(0.05) ? kD : kC;
    auto lookerup = MakeStrategy(grim);
    auto grudger = Instantiate(Named("Grudger"));
    CHECK(PlayAgainstScript(*lookerup, script, rng) ==
          PlayAgainstScript(*grudger, script, rng));
  }
}

TEST_CASE("niceness flag matches play against Cooperator") {
  const Registry& r = Registry::Default();
  MatchConfig config;
  for (std::size_t i = 0; i < r.specs().size(); ++i) {
    const StrategySpec& spec = r.specs()[i];
    CAPTURE(spec.name);
    bool defected = false;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      config.seed = seed;
      const MatchOutcome o = PlayMatch(spec, Named("Cooperator"), config);
      defected |= std::count(o.moves_a.begin(), o.moves_a.end(), kD) > 0;
    }
    CHECK(r.descriptors()[i].nice == !defected);
  }
  CHECK(r.Describe("Tit For Tat")->nice);
  CHECK_FALSE(r.Describe("Defector")->nice);
  CHECK_FALSE(r.Describe("Handshake")->nice);
}

TEST_CASE("Meta Majority votes with ties to C") {
  const auto c = Named("Cooperator");
  const auto d = Named("Defector");
  RandomStream rng(8);
  for (int n = 0; n < 20; ++n) {
    const History h = MakeHistory(std::string(n, 'C'), std::string(n, 'D'));
    CHECK(Decide(MetaMajority({c, c, d}), h) == kC);
    CHECK(Decide(MetaMajority({d}), h) == kD);
    CHECK(Decide(MetaMajority({c, d}), h) == kC);
    CHECK(Decide(MetaMajority({c, d, d}), h) == kD);
  }
  CHECK_THROWS_AS(MetaMajority({}), std::invalid_argument);
}

TEST_CASE("Meta Winner follows the best hypothetical scorer") {
  const auto c = Named("Cooperator");
  const auto d = Named("Defector");
  CHECK(Decide(MetaWinner({c, d}), History{}) == kC);
  CHECK(Decide(MetaWinner({d, c}), History{}) == kD);
  const MatchOutcome o =
      PlayMatch(MetaWinner({c, d}), Named("Cooperator"), MatchConfig{});
  CHECK(o.moves_a.front() == kC);
  CHECK(std::all_of(o.moves_a.begin() + 5, o.moves_a.end(), [](Action a) { return a == kD; }));

  RandomStream rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const auto script = RandomActions(1 + rng.UniformInt(40), rng);
    auto meta = Instantiate(MetaWinner({Named("Tit For Tat")}));
    auto tft = Instantiate(Named("Tit For Tat"));
    CHECK(PlayAgainstScript(*meta, script, rng) == PlayAgainstScript(*tft, script, rng));
  }
  CHECK_THROWS_AS(MetaWinner({}), std::invalid_argument);
}

// Records what it was shown on every turn.
class Spy : public Strategy {
 public:
  Action Decide(const History& h, RandomStream&) override {
    seen.emplace_back(h.opponent().begin(), h.opponent().end());
    seen_own.emplace_back(h.own().begin(), h.own().end());
    return seen.size() % 3 == 0 ? kD : kC;
  }
  std::vector<std::vector<Action>> seen;
  std::vector<std::vector<Action>> seen_own;
};

TEST_CASE("players see only executed moves from earlier turns") {
  for (double noise : {0.0, 0.2}) {
    Spy spy;
    auto other = Instantiate(Named("Random: 0.5"));
    MatchConfig config;
    config.turns = 50;
    config.noise = noise;
    config.seed = 10;
    const MatchOutcome o = PlayMatch(spy, *other, config);
    REQUIRE(spy.seen.size() == 50);
    for (std::size_t t = 0; t < 50; ++t) {
      CHECK(spy.seen[t] == std::vector<Action>(o.moves_b.begin(), o.moves_b.begin() + t));
      CHECK(spy.seen_own[t] ==
            std::vector<Action>(o.moves_a.begin(), o.moves_a.begin() + t));
    }
    if (noise == 0.0) {
      // Executed equals intended without noise.
      for (std::size_t t = 0; t < 50; ++t) CHECK(o.moves_a[t] == ((t + 1) % 3 == 0 ? kD : kC));
    }
  }
}

TEST_CASE("score conservation over the corpus") {
  const auto& specs = Registry::Default().specs();
  MatchConfig config;
  config.turns = 50;
  config.noise = 0.05;
  for (std::size_t i = 0; i < specs.size(); i += 3) {
    for (std::size_t j = 0; j < specs.size(); j += 4) {
      config.seed = i * 100 + j;
      const MatchOutcome o = PlayMatch(specs[i], specs[j], config);
      std::int64_t total = 0;
      for (int t = 0; t < o.turns(); ++t) {
        const auto [x, y] = ScoreRound(o.move(static_cast<std::size_t>(t)), PayoffMatrix{});
        CHECK((x + y == 6 || x + y == 5 || x + y == 2));
        total += x + y;
      }
      CHECK(o.score_a + o.score_b == total);
    }
  }
}

TEST_CASE("classic catalog lookups") {
  CHECK(FindClassic("tit_for_tat") != nullptr);
  CHECK(FindClassic("no_such") == nullptr);
  CHECK_FALSE(Validate(Classic("no_such", "X")).empty());
  CHECK_THROWS_AS(Instantiate(Classic("no_such", "X")), InvalidSpecError);
  CHECK_FALSE(Validate(Classic("random", "R", 1.5)).empty());
  CHECK_FALSE(Describe(Classic("random", "R", 1.0)).stochastic);
}

}  // namespace
}  // namespace ipd
