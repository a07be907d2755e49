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

// Acceptance checks. Prints one PASS or FAIL line per criterion and exits
// non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ipd/action.h"
#include "ipd/archetypes.h"
#include "ipd/cli.h"
#include "ipd/corpus.h"
#include "ipd/engine.h"
#include "ipd/moran.h"
#include "ipd/random.h"
#include "ipd/report.h"
#include "ipd/strategy.h"
#include "ipd/tournament.h"
#include "ipd/training.h"

namespace ipd {
namespace {

namespace fs = std::filesystem;

StrategySpec Named(std::string_view name) {
  const StrategySpec* spec = Registry::Default().Find(name);
  if (spec == nullptr) throw std::runtime_error(fmt::format("no strategy {}", name));
  return *spec;
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

// 1. Three-player oracle.
Verdict ExactOracle() {
  TournamentConfig config;
  config.roster = {Named("Cooperator"), Named("Defector"), Named("Tit For Tat")};
  config.repetitions = 1;
  const TournamentResult r = RunTournament(config);
  // Match totals: C-D 0/1000, C-TFT 600/600, D-TFT 1000+204 and 600+199.
  const double expected[] = {600.0 / 400, 1204.0 / 400, 799.0 / 400};
  bool ok = expected[0] == 1.5 && expected[1] == 3.01 && expected[2] == 1.9975;
  for (std::size_t p = 0; p < 3; ++p) ok &= r.Score(0, p) == expected[p];
  ok &= r.wins[0] == std::vector<int>{0, 2, 0};
  ok &= r.ranks[0] == std::vector<int>{3, 1, 2};
  return {ok, fmt::format("scores {} {} {}, wins {}, ranks {}", r.Score(0, 0), r.Score(0, 1),
                          r.Score(0, 2), fmt::join(r.wins[0], " "),
                          fmt::join(r.ranks[0], " "))};
}

// 2. Payoff matrix.
Verdict Payoffs() {
  const PayoffMatrix p;
  const bool ok = ScoreRound({kC, kC}, p) == std::pair{3, 3} &&
                  ScoreRound({kC, kD}, p) == std::pair{0, 5} &&
                  ScoreRound({kD, kC}, p) == std::pair{5, 0} &&
                  ScoreRound({kD, kD}, p) == std::pair{1, 1};
  return {ok, "(R, S, T, P) = (3, 0, 5, 1)"};
}

// 3. Tit For Tat wins no match against the full corpus.
Verdict TftNeverWins() {
  TournamentConfig config;
  config.roster = Registry::Default().specs();
  config.repetitions = 10;
  config.seed = 3;
  const TournamentResult r = RunTournament(config);
  const auto tft = static_cast<std::size_t>(r.IndexOf("Tit For Tat"));
  int total = 0;
  for (const auto& wins : r.wins) total += wins[tft];
  return {r.size() >= 30 && total == 0,
          fmt::format("{} players, Tit For Tat wins over 10 repetitions: {}", r.size(),
                      total)};
}

// 4. Nice deterministic pairs cooperate fully.
Verdict NiceCluster() {
  TournamentConfig config;
  const Registry& reg = Registry::Default();
  for (std::size_t i = 0; i < reg.specs().size(); ++i) {
    if (reg.descriptors()[i].nice && !reg.descriptors()[i].stochastic) {
      config.roster.push_back(reg.specs()[i]);
    }
  }
  config.repetitions = 1;
  const TournamentResult r = RunTournament(config);
  int bad = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = 0; j < r.size(); ++j) bad += i != j && r.PairwisePayoff(i, j) != 3.0;
  }
  return {r.size() >= 2 && bad == 0,
          fmt::format("{} nice deterministic players, {} pairs off 3.0", r.size(), bad)};
}

// 5. Noise statistics.
Verdict Noise() {
  RandomStream rng(5);
  constexpr int kDraws = 1'000'000;
  int flips = 0;
  for (int i = 0; i < kDraws; ++i) flips += ApplyNoise(kC, 0.05, rng) == kD;
  const double rate = static_cast<double>(flips) / kDraws;

  MatchConfig match;
  match.noise = 0.05;
  const StrategySpec tft = Named("Tit For Tat");
  std::int64_t total = 0;
  constexpr int kReps = 1000;
  for (int rep = 0; rep < kReps; ++rep) {
    match.seed = DeriveSeed(55, {static_cast<std::uint64_t>(rep)});
    total += PlayMatch(tft, tft, match).score_a;
  }
  const double mean = static_cast<double>(total) / (kReps * match.turns);
  return {std::abs(rate - 0.05) <= 0.002 && mean < 3.0,
          fmt::format("flip rate {:.5f}, TFT-TFT mean {:.4f}", rate, mean)};
}

const std::vector<std::string> kClassicPool = {
    "Cooperator",  "Defector",     "Tit For Tat", "Grudger",
    "Tit For 2 Tats", "Win-Stay Lose-Shift", "Alternator", "Random: 0.5",
    "Suspicious Tit For Tat", "Bully"};

// 6. A short evolution matches Tit For Tat's pool score.
Verdict ShortTraining() {
  Objective objective;
  for (const std::string& n : kClassicPool) objective.pool.push_back(Named(n));
  Objective judge = objective;
  judge.repetitions = 200;
  const double tft = Evaluate(Named("Tit For Tat"), judge, 606);
  EvoConfig config;
  config.generations = 10;
  int hits = 0;
  std::vector<std::string> scores;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    config.seed = seed;
    const EvoResult r = Evolve({Archetype::kLookerUp, {0, 1, 2}, 0, 0}, objective, config);
    const double trained = Evaluate(Decode(r.best), judge, 606);
    hits += trained >= tft;
    scores.push_back(fmt::format("{:.3f}", trained));
  }
  return {hits >= 8, fmt::format("{}/10 seeds reach Tit For Tat's {:.3f} (trained: {})", hits,
                                 tft, fmt::join(scores, " "))};
}

// 7. A trained lookup table tops a tournament against the corpus.
Verdict TrainedDominance() {
  const std::vector<StrategySpec> corpus = Registry::Default().DefaultRoster();
  Objective objective;
  objective.pool = corpus;
  EvoConfig config;
  config.generations = 50;
  int firsts = 0;
  std::vector<std::string> ranks;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    config.seed = seed;
    const EvoResult r = Evolve({Archetype::kLookerUp, {2, 2, 2}, 0, 0}, objective, config);
    TournamentConfig t;
    t.roster = corpus;
    t.roster.push_back(Decode(r.best, "Trained"));
    t.repetitions = 10;
    t.seed = 7000 + seed;
    const TournamentResult result = RunTournament(t);
    const std::vector<std::size_t> order = OrderByMedianScore(result);
    const auto pos = std::find(order.begin(), order.end(), result.size() - 1) - order.begin();
    firsts += pos == 0;
    ranks.push_back(std::to_string(pos + 1));
  }
  return {firsts >= 9, fmt::format("ranked first in {}/10 seeds (positions: {})", firsts,
                                   fmt::join(ranks, " "))};
}

// 8. Neutral Moran drift.
Verdict NeutralDrift() {
  const StrategySpec tft = Named("Tit For Tat");
  StrategySpec variant = tft;
  variant.name = "Tit For Tat variant";
  constexpr int kRuns = 10000;
  int fixed = 0;
  MoranConfig config;
  config.population = {variant, tft, tft, tft};
  config.turns = 20;
  for (int run = 0; run < kRuns; ++run) {
    config.seed = DeriveSeed(88, {static_cast<std::uint64_t>(run)});
    const MoranOutcome o = RunMoran(config);
    fixed += o.winner && *o.winner == variant.name;
  }
  const double p = static_cast<double>(fixed) / kRuns;
  return {std::abs(p - 0.25) <= 0.02, fmt::format("fixation {:.4f} over {} runs", p, kRuns)};
}

std::vector<Action> Play(Strategy& s, const std::vector<Action>& script, RandomStream& rng) {
  History h;
  std::vector<Action> moves;
  for (Action opp : script) {
    const Action own = s.Decide(h, rng);
    moves.push_back(own);
    h.Record(own, opp);
  }
  return moves;
}

std::vector<Action> RandomScript(RandomStream& rng) {
  std::vector<Action> script(static_cast<std::size_t>(1 + rng.UniformInt(100)));
  for (Action& a : script) a = rng.Bernoulli(0.5) ? kD : kC;
  return script;
}

// 9. Equivalent representations play identically.
Verdict CrossRepresentation() {
  RandomStream rng(9);
  int grim = 0, tft = 0, hmm = 0;
  const StrategySpec grudger = Named("Grudger");
  const StrategySpec corpus_tft = Named("Tit For Tat");
  const LookerUpSpec grim_table{{0, 1, 1}, {kC, kD, kD, kD}};
  const FsmSpec tft_fsm{1, 0, kC, {{0, kC}, {0, kD}}};
  for (int trial = 0; trial < 1000; ++trial) {
    const auto script = RandomScript(rng);
    grim += Play(*MakeStrategy(grim_table), script, rng) !=
            Play(*Instantiate(grudger), script, rng);
    tft += Play(*MakeStrategy(tft_fsm), script, rng) !=
           Play(*Instantiate(corpus_tft), script, rng);

    HmmSpec spec;
    spec.num_states = 1 + rng.UniformInt(5);
    const auto n = static_cast<std::size_t>(spec.num_states);
    spec.initial_state = rng.UniformInt(spec.num_states);
    spec.initial_action = rng.Bernoulli(0.5) ? kD : kC;
    for (auto* m : {&spec.transition_c, &spec.transition_d}) {
      m->assign(n * n, 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        (*m)[r * n + static_cast<std::size_t>(rng.UniformInt(spec.num_states))] = 1.0;
      }
    }
    for (std::size_t s = 0; s < n; ++s) spec.emission.push_back(rng.UniformInt(2));
    hmm += Play(*MakeStrategy(spec), script, rng) !=
           Play(*MakeStrategy(InducedFsm(spec)), script, rng);
  }
  return {grim == 0 && tft == 0 && hmm == 0,
          fmt::format("disagreements over 1000 histories: Grim {}, TFT {}, HMM {}", grim,
                      tft, hmm)};
}

std::map<std::string, std::string> Artifacts(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name != cli::kManifestFile) {
      files[name] = ReadFile(entry.path());
    }
  }
  return files;
}

// 10. Byte-identical artifacts across reruns and worker counts.
Verdict Reproducibility() {
  const fs::path root = fs::temp_directory_path() / "ipd_acceptance_repro";
  fs::remove_all(root);
  const std::vector<std::string> tournament = {
      "ipd", "tournament", "--roster", "default", "--turns", "100", "--repetitions",
      "5", "--noise", "0.05", "--seed", "10"};
  const std::vector<std::string> train = {
      "ipd", "train", "--archetype", "ann", "--hidden", "3", "--roster", "classics",
      "--turns", "50", "--noise", "0.05", "--repetitions", "2", "--population", "12",
      "--elites", "3", "--generations", "4", "--seed", "10"};
  bool ok = true;
  int runs = 0;
  std::ostringstream sink;
  for (const auto* args : {&tournament, &train}) {
    std::map<std::string, std::string> first;
    for (const char* workers : {"1", "4", "4"}) {
      std::vector<std::string> a = *args;
      const fs::path dir = root / std::to_string(runs++);
      a.insert(a.end(), {"--workers", workers, "-o", dir.string()});
      if (cli::Run(a, sink, sink) != cli::kExitOk) return {false, sink.str()};
      const auto files = Artifacts(dir);
      if (first.empty()) {
        first = files;
      } else {
        ok &= files == first;
      }
    }
  }
  fs::remove_all(root);
  return {ok, fmt::format("{} runs of tournament and train compared", runs)};
}

}  // namespace
}  // namespace ipd

int main() {
  struct Criterion {
    const char* name;
    std::function<ipd::Verdict()> check;
  };
  const Criterion criteria[] = {
      {"exact three-player oracle", ipd::ExactOracle},
      {"payoff matrix", ipd::Payoffs},
      {"Tit For Tat never wins", ipd::TftNeverWins},
      {"nice cluster scores 3.0", ipd::NiceCluster},
      {"noise statistics", ipd::Noise},
      {"short training reaches Tit For Tat", ipd::ShortTraining},
      {"trained strategy ranks first", ipd::TrainedDominance},
      {"neutral Moran drift", ipd::NeutralDrift},
      {"cross-representation equivalence", ipd::CrossRepresentation},
      {"byte-identical reproducibility", ipd::Reproducibility},
  };
  int failed = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    ipd::Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !v.pass;
    std::printf("%s %2d %s: %s (%.2fs)\n", v.pass ? "PASS" : "FAIL", index, c.name,
                v.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
