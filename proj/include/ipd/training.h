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

// Evolutionary and particle swarm training of archetype parameters against a
// fixed opponent pool.

#ifndef IPD_TRAINING_H_
#define IPD_TRAINING_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ipd/action.h"
#include "ipd/archetypes.h"
#include "ipd/random.h"
#include "ipd/strategy_spec.h"

namespace ipd {

enum class Archetype { kLookerUp, kGambler, kAnn, kFsm, kHmm, kMemoryOne };

std::string_view ArchetypeKey(Archetype archetype);
std::optional<Archetype> ParseArchetype(std::string_view key);

// Everything that fixes the length and meaning of a genome.
struct GenomeShape {
  Archetype archetype = Archetype::kLookerUp;
  LookupShape lookup;    // kLookerUp, kGambler
  int hidden_width = 0;  // kAnn
  int num_states = 0;    // kFsm, kHmm
  friend bool operator==(const GenomeShape&, const GenomeShape&) = default;
};

enum class GeneKind { kAction, kState, kProbability, kWeight };

// Flat parameter vector. Layouts:
//   lookerup   table entries in key order (C=0, D=1)
//   gambler    table probabilities in key order
//   ann        input weights row-major, input biases, output weights
//   fsm        initial state, initial action, then (next state, action) per
//              (state, opponent move) in transition order
//   hmm        initial state, initial action, transition_c rows,
//              transition_d rows, emission
//   memoryone  initial action, p_cc, p_cd, p_dc, p_dd
struct Genome {
  GenomeShape shape;
  std::vector<double> genes;
  friend bool operator==(const Genome&, const Genome&) = default;
};

std::size_t GenomeLength(const GenomeShape& shape);
std::vector<GeneKind> GeneKinds(const GenomeShape& shape);
// Half-open gene ranges that crossover inherits as a whole: FSM transition
// pairs and HMM matrix rows; every other gene is its own unit.
std::vector<std::pair<std::size_t, std::size_t>> CrossoverUnits(
    const GenomeShape& shape);
// Throws std::invalid_argument for impossible shapes.
void CheckShape(const GenomeShape& shape);

// Throws std::invalid_argument for classic and meta specs.
Genome Encode(const StrategySpec& spec);
// Throws InvalidSpecError if the genes do not form a valid spec.
StrategySpec Decode(const Genome& genome, std::string name = "Trained");

Genome RandomGenome(const GenomeShape& shape, RandomStream& rng);

// Each gene changes with probability `rate`: actions and states are redrawn
// uniformly, probabilities get clipped N(0, 0.1) noise, weights N(0, 0.5).
// Perturbed HMM rows are renormalized.
Genome Mutate(const Genome& genome, double rate, RandomStream& rng);
// Uniform crossover over CrossoverUnits. Throws std::invalid_argument on
// shape mismatch.
Genome Crossover(const Genome& a, const Genome& b, RandomStream& rng);

enum class ObjectiveKind { kMeanPayoff, kPayoffDifference, kMoranFixation };

std::string_view ObjectiveKey(ObjectiveKind kind);
std::optional<ObjectiveKind> ParseObjective(std::string_view key);

struct Objective {
  ObjectiveKind kind = ObjectiveKind::kMeanPayoff;
  std::vector<StrategySpec> pool;
  int turns = 200;
  double noise = 0.0;
  // Matches (or Moran runs) per opponent. Pairs of deterministic players at
  // zero noise play once, since every repetition is identical.
  int repetitions = 10;
  PayoffMatrix payoffs;
};

// Throws std::invalid_argument for an empty pool or bad match settings.
void CheckObjective(const Objective& objective);

// Higher is better for every kind:
//   mean_payoff        mean per-turn score over opponents and repetitions
//   payoff_difference  mean per-turn (own - opponent) score
//   moran_fixation     fraction of Moran runs, one candidate against three
//                      copies of a pool member, that the candidate takes over
double Evaluate(const StrategySpec& candidate, const Objective& objective,
                std::uint64_t seed);
double Evaluate(const Genome& genome, const Objective& objective,
                std::uint64_t seed);

struct TraceRow {
  int generation = 0;
  double best = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

// generation,best,mean,std
std::string TraceCsv(const std::vector<TraceRow>& trace);

struct EvoConfig {
  int population_size = 40;
  double mutation_rate = 0.10;
  int elite_count = 10;
  int generations = 500;
  bool crossover = true;
  std::uint64_t seed = 0;
  // Evaluate every generation with the same seed instead of a fresh one.
  bool frozen_seed = false;
  int workers = 0;
  // Stop after this many generations of this call (for interrupted runs);
  // 0 runs to completion.
  int stop_after = 0;
};

void CheckEvoConfig(const EvoConfig& config);

// Run state written after every generation.
struct EvoCheckpoint {
  std::uint64_t config_hash = 0;
  // Generations completed.
  int generation = 0;
  std::vector<Genome> population;
  Genome best;
  double best_fitness = 0.0;
  std::vector<TraceRow> trace;
};

std::string SerializeCheckpoint(const EvoCheckpoint& checkpoint);
// Throws ParseError on malformed input.
EvoCheckpoint DeserializeCheckpoint(std::string_view text);

struct EvoResult {
  Genome best;
  double best_fitness = 0.0;
  std::vector<TraceRow> trace;
  bool complete = false;
};

struct EvoOptions {
  // Written after every generation when set.
  std::optional<std::filesystem::path> checkpoint_path;
  // Continue from this state instead of a fresh random population.
  std::optional<EvoCheckpoint> resume;
  // Individuals placed at the front of the first population.
  std::vector<Genome> seeds;
};

// Hash of everything that determines the run, stored in checkpoints so a
// resume with different settings is rejected.
std::uint64_t EvoConfigHash(const GenomeShape& shape, const Objective& objective,
                            const EvoConfig& config);

// Each generation: evaluate everyone, keep the elite_count best unchanged,
// fill the rest with offspring of uniformly drawn elites (crossover of two
// elites when enabled, then mutation). Returns the best genome ever seen.
EvoResult Evolve(const GenomeShape& shape, const Objective& objective,
                 const EvoConfig& config, const EvoOptions& options = {});

struct PsoConfig {
  int swarm_size = 20;
  double inertia = 0.7;
  double cognitive = 1.5;
  double social = 1.5;
  int iterations = 100;
  // Per-dimension bounds; empty means [0, 1] everywhere.
  std::vector<double> lower;
  std::vector<double> upper;
  std::uint64_t seed = 0;
  int workers = 0;
};

void CheckPsoConfig(const PsoConfig& config, std::size_t dimensions);

struct PsoResult {
  std::vector<double> best;
  double best_value = 0.0;
  // Per iteration: best-so-far, mean and std of the current swarm values.
  std::vector<TraceRow> trace;
};

// Global-best particle swarm maximizing f. Positions are clipped to the
// bounds after every move. f must be safe to call concurrently.
PsoResult PsoMaximize(std::size_t dimensions,
                      const std::function<double(std::span<const double>)>& f,
                      const PsoConfig& config);

struct PsoGamblerResult {
  GamblerSpec best;
  double best_fitness = 0.0;
  std::vector<TraceRow> trace;
};

// Swarm over the gambler probability table, evaluated with a fixed seed.
PsoGamblerResult PsoGambler(const LookupShape& shape, const Objective& objective,
                            const PsoConfig& config);

}  // namespace ipd

#endif  // IPD_TRAINING_H_
