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

#include "ipd/training.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "ipd/corpus.h"
#include "ipd/engine.h"
#include "ipd/moran.h"
#include "ipd/parallel.h"
#include "ipd/report.h"
#include "ipd/serialization.h"

namespace ipd {

namespace {

// Stream tags, so initialisation, variation and evaluation never share draws.
constexpr std::uint64_t kInitTag = 0x696e6974;
constexpr std::uint64_t kVaryTag = 0x76617279;
constexpr std::uint64_t kEvalTag = 0x6576616c;

constexpr double kProbabilitySigma = 0.1;
constexpr double kWeightSigma = 0.5;

constexpr const char* kCandidateName = "<candidate>";

}  // namespace

std::string_view ArchetypeKey(Archetype archetype) {
  switch (archetype) {
    case Archetype::kLookerUp: return "lookerup";
    case Archetype::kGambler: return "gambler";
    case Archetype::kAnn: return "ann";
    case Archetype::kFsm: return "fsm";
    case Archetype::kHmm: return "hmm";
    case Archetype::kMemoryOne: return "memoryone";
  }
  return "";
}

std::optional<Archetype> ParseArchetype(std::string_view key) {
  for (Archetype a : {Archetype::kLookerUp, Archetype::kGambler, Archetype::kAnn,
                      Archetype::kFsm, Archetype::kHmm, Archetype::kMemoryOne}) {
    if (ArchetypeKey(a) == key) return a;
  }
  return std::nullopt;
}

void CheckShape(const GenomeShape& shape) {
  switch (shape.archetype) {
    case Archetype::kLookerUp:
    case Archetype::kGambler: {
      const LookupShape& s = shape.lookup;
      if (s.n1 < 0 || s.m1 < 0 || s.m2 < 0 || s.key_length() > 20) {
        throw std::invalid_argument(
            fmt::format("bad lookup shape ({}, {}, {})", s.n1, s.m1, s.m2));
      }
      break;
    }
    case Archetype::kAnn:
      if (shape.hidden_width < 1) {
        throw std::invalid_argument("hidden width must be >= 1");
      }
      break;
    case Archetype::kFsm:
    case Archetype::kHmm:
      if (shape.num_states < 1) {
        throw std::invalid_argument("number of states must be >= 1");
      }
      break;
    case Archetype::kMemoryOne:
      break;
  }
}

std::size_t GenomeLength(const GenomeShape& shape) {
  const auto h = static_cast<std::size_t>(shape.hidden_width);
  const auto n = static_cast<std::size_t>(shape.num_states);
  switch (shape.archetype) {
    case Archetype::kLookerUp:
    case Archetype::kGambler: return shape.lookup.table_size();
    case Archetype::kAnn: return h * kernels::kAnnInputs + 2 * h;
    case Archetype::kFsm: return 2 + 4 * n;
    case Archetype::kHmm: return 2 + 2 * n * n + n;
    case Archetype::kMemoryOne: return 5;
  }
  return 0;
}

std::vector<GeneKind> GeneKinds(const GenomeShape& shape) {
  std::vector<GeneKind> kinds;
  const std::size_t length = GenomeLength(shape);
  kinds.reserve(length);
  switch (shape.archetype) {
    case Archetype::kLookerUp:
      kinds.assign(length, GeneKind::kAction);
      break;
    case Archetype::kGambler:
      kinds.assign(length, GeneKind::kProbability);
      break;
    case Archetype::kAnn:
      kinds.assign(length, GeneKind::kWeight);
      break;
    case Archetype::kFsm:
      kinds = {GeneKind::kState, GeneKind::kAction};
      for (int k = 0; k < 2 * shape.num_states; ++k) {
        kinds.push_back(GeneKind::kState);
        kinds.push_back(GeneKind::kAction);
      }
      break;
    case Archetype::kHmm:
      kinds = {GeneKind::kState, GeneKind::kAction};
      kinds.resize(length, GeneKind::kProbability);
      break;
    case Archetype::kMemoryOne:
      kinds = {GeneKind::kAction};
      kinds.resize(length, GeneKind::kProbability);
      break;
  }
  return kinds;
}

std::vector<std::pair<std::size_t, std::size_t>> CrossoverUnits(
    const GenomeShape& shape) {
  std::vector<std::pair<std::size_t, std::size_t>> units;
  const std::size_t length = GenomeLength(shape);
  const auto n = static_cast<std::size_t>(shape.num_states);
  std::size_t i = 0;
  if (shape.archetype == Archetype::kFsm) {
    units = {{0, 1}, {1, 2}};
    for (i = 2; i < length; i += 2) units.emplace_back(i, i + 2);
    return units;
  }
  if (shape.archetype == Archetype::kHmm) {
    units = {{0, 1}, {1, 2}};
    for (i = 2; i < 2 + 2 * n * n; i += n) units.emplace_back(i, i + n);
  }
  for (; i < length; ++i) units.emplace_back(i, i + 1);
  return units;
}

// Encoding.

namespace {

double ActionGene(Action a) { return a == kD ? 1.0 : 0.0; }

Action GeneAction(double g, std::string_view what) {
  if (g == 0.0) return kC;
  if (g == 1.0) return kD;
  throw InvalidSpecError(fmt::format("{}: action gene {} is not 0 or 1", what, g));
}

int GeneState(double g, int num_states, std::string_view what) {
  if (g != std::floor(g) || g < 0.0 || g >= num_states) {
    throw InvalidSpecError(
        fmt::format("{}: state gene {} out of range [0, {})", what, g, num_states));
  }
  return static_cast<int>(g);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Genome Encode(const StrategySpec& spec) {
  Genome g;
  std::visit(
      Overloaded{
          [](const ClassicSpec&) {
            throw std::invalid_argument("classic strategies have no genome");
          },
          [](const MetaSpec&) {
            throw std::invalid_argument("meta strategies have no genome");
          },
          [&g](const LookerUpSpec& s) {
            g.shape.archetype = Archetype::kLookerUp;
            g.shape.lookup = s.shape;
            for (Action a : s.table) g.genes.push_back(ActionGene(a));
          },
          [&g](const GamblerSpec& s) {
            g.shape.archetype = Archetype::kGambler;
            g.shape.lookup = s.shape;
            g.genes = s.table;
          },
          [&g](const AnnSpec& s) {
            g.shape.archetype = Archetype::kAnn;
            g.shape.hidden_width = s.hidden_width;
            g.genes = s.input_weights;
            g.genes.insert(g.genes.end(), s.input_bias.begin(), s.input_bias.end());
            g.genes.insert(g.genes.end(), s.output_weights.begin(),
                           s.output_weights.end());
          },
          [&g](const FsmSpec& s) {
            g.shape.archetype = Archetype::kFsm;
            g.shape.num_states = s.num_states;
            g.genes = {static_cast<double>(s.initial_state),
                       ActionGene(s.initial_action)};
            for (const FsmTransition& t : s.transitions) {
              g.genes.push_back(t.next_state);
              g.genes.push_back(ActionGene(t.action));
            }
          },
          [&g](const HmmSpec& s) {
            g.shape.archetype = Archetype::kHmm;
            g.shape.num_states = s.num_states;
            g.genes = {static_cast<double>(s.initial_state),
                       ActionGene(s.initial_action)};
            for (const auto* v : {&s.transition_c, &s.transition_d, &s.emission}) {
              g.genes.insert(g.genes.end(), v->begin(), v->end());
            }
          },
          [&g](const MemoryOneSpec& s) {
            g.shape.archetype = Archetype::kMemoryOne;
            g.genes = {ActionGene(s.initial_action)};
            g.genes.insert(g.genes.end(), s.probabilities.begin(),
                           s.probabilities.end());
          },
      },
      spec.body);
  if (g.genes.size() != GenomeLength(g.shape)) {
    throw InvalidSpecError(fmt::format("strategy '{}' has the wrong number of "
                                       "parameters for its shape", spec.name));
  }
  return g;
}

StrategySpec Decode(const Genome& genome, std::string name) {
  CheckShape(genome.shape);
  const std::vector<double>& x = genome.genes;
  if (x.size() != GenomeLength(genome.shape)) {
    throw InvalidSpecError(fmt::format("genome has {} genes, expected {}", x.size(),
                                       GenomeLength(genome.shape)));
  }
  const int n = genome.shape.num_states;
  const auto nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  StrategySpec spec;
  spec.name = std::move(name);
  spec.trained = true;
  switch (genome.shape.archetype) {
    case Archetype::kLookerUp: {
      LookerUpSpec s{genome.shape.lookup, {}};
      for (double g : x) s.table.push_back(GeneAction(g, "table"));
      spec.body = std::move(s);
      break;
    }
    case Archetype::kGambler:
      spec.body = GamblerSpec{genome.shape.lookup, x};
      break;
    case Archetype::kAnn: {
      const auto h = static_cast<std::size_t>(genome.shape.hidden_width);
      const std::size_t w = h * kernels::kAnnInputs;
      AnnSpec s;
      s.hidden_width = genome.shape.hidden_width;
      s.input_weights.assign(x.begin(), x.begin() + w);
      s.input_bias.assign(x.begin() + w, x.begin() + w + h);
      s.output_weights.assign(x.begin() + w + h, x.end());
      spec.body = std::move(s);
      break;
    }
    case Archetype::kFsm: {
      FsmSpec s;
      s.num_states = n;
      s.initial_state = GeneState(x[0], n, "initial_state");
      s.initial_action = GeneAction(x[1], "initial_action");
      for (std::size_t i = 2; i < x.size(); i += 2) {
        s.transitions.push_back(
            {GeneState(x[i], n, "transition"), GeneAction(x[i + 1], "transition")});
      }
      spec.body = std::move(s);
      break;
    }
    case Archetype::kHmm: {
      HmmSpec s;
      s.num_states = n;
      s.initial_state = GeneState(x[0], n, "initial_state");
      s.initial_action = GeneAction(x[1], "initial_action");
      s.transition_c.assign(x.begin() + 2, x.begin() + 2 + nn);
      s.transition_d.assign(x.begin() + 2 + nn, x.begin() + 2 + 2 * nn);
      s.emission.assign(x.begin() + 2 + 2 * nn, x.end());
      spec.body = std::move(s);
      break;
    }
    case Archetype::kMemoryOne: {
      MemoryOneSpec s;
      s.initial_action = GeneAction(x[0], "initial_action");
      std::copy(x.begin() + 1, x.end(), s.probabilities.begin());
      spec.body = s;
      break;
    }
  }
  if (const auto v = Validate(spec); !v.empty()) throw InvalidSpecError(v.front());
  return spec;
}

// Variation.

namespace {

void NormalizeRow(std::span<double> row) {
  double sum = 0.0;
  for (double p : row) sum += p;
  if (sum <= 0.0) {
    std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(row.size()));
    return;
  }
  for (double& p : row) p /= sum;
}

// HMM transition rows are the units past the two leading genes.
std::size_t HmmRowCount(const GenomeShape& shape) {
  return shape.archetype == Archetype::kHmm ? 2 * static_cast<std::size_t>(shape.num_states)
                                            : 0;
}

}  // namespace

Genome RandomGenome(const GenomeShape& shape, RandomStream& rng) {
  CheckShape(shape);
  Genome g{shape, {}};
  for (GeneKind kind : GeneKinds(shape)) {
    switch (kind) {
      case GeneKind::kAction: g.genes.push_back(rng.UniformInt(2)); break;
      case GeneKind::kState: g.genes.push_back(rng.UniformInt(shape.num_states)); break;
      case GeneKind::kProbability: g.genes.push_back(rng.Uniform()); break;
      case GeneKind::kWeight: g.genes.push_back(2.0 * rng.Uniform() - 1.0); break;
    }
  }
  const auto n = static_cast<std::size_t>(shape.num_states);
  for (std::size_t r = 0; r < HmmRowCount(shape); ++r) {
    NormalizeRow(std::span(g.genes).subspan(2 + r * n, n));
  }
  return g;
}

Genome Mutate(const Genome& genome, double rate, RandomStream& rng) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw std::invalid_argument("mutation rate must be in [0, 1]");
  }
  Genome g = genome;
  const std::vector<GeneKind> kinds = GeneKinds(g.shape);
  const auto n = static_cast<std::size_t>(g.shape.num_states);
  std::vector<bool> touched_rows(HmmRowCount(g.shape), false);
  for (std::size_t i = 0; i < g.genes.size(); ++i) {
    if (!rng.Bernoulli(rate)) continue;
    double& x = g.genes[i];
    switch (kinds[i]) {
      case GeneKind::kAction: x = rng.UniformInt(2); break;
      case GeneKind::kState: x = rng.UniformInt(g.shape.num_states); break;
      case GeneKind::kProbability:
        x = std::clamp(x + rng.Normal(0.0, kProbabilitySigma), 0.0, 1.0);
        break;
      case GeneKind::kWeight: x += rng.Normal(0.0, kWeightSigma); break;
    }
    if (i >= 2 && (i - 2) / std::max<std::size_t>(n, 1) < touched_rows.size()) {
      touched_rows[(i - 2) / n] = true;
    }
  }
  for (std::size_t r = 0; r < touched_rows.size(); ++r) {
    if (touched_rows[r]) NormalizeRow(std::span(g.genes).subspan(2 + r * n, n));
  }
  return g;
}

Genome Crossover(const Genome& a, const Genome& b, RandomStream& rng) {
  if (!(a.shape == b.shape) || a.genes.size() != b.genes.size()) {
    throw std::invalid_argument("crossover parents have different shapes");
  }
  Genome child = a;
  for (const auto& [begin, end] : CrossoverUnits(a.shape)) {
    if (rng.Bernoulli(0.5)) continue;
    std::copy(b.genes.begin() + begin, b.genes.begin() + end,
              child.genes.begin() + begin);
  }
  return child;
}

// Objectives.

std::string_view ObjectiveKey(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::kMeanPayoff: return "mean_payoff";
    case ObjectiveKind::kPayoffDifference: return "payoff_difference";
    case ObjectiveKind::kMoranFixation: return "moran";
  }
  return "";
}

std::optional<ObjectiveKind> ParseObjective(std::string_view key) {
  if (key == "mean_payoff" || key == "payoff") return ObjectiveKind::kMeanPayoff;
  if (key == "payoff_difference" || key == "difference") {
    return ObjectiveKind::kPayoffDifference;
  }
  if (key == "moran" || key == "moran_fixation") return ObjectiveKind::kMoranFixation;
  return std::nullopt;
}

void CheckObjective(const Objective& objective) {
  if (objective.pool.empty()) throw std::invalid_argument("opponent pool is empty");
  if (objective.repetitions < 1) {
    throw std::invalid_argument("repetitions per evaluation must be >= 1");
  }
  MatchConfig match;
  match.turns = objective.turns;
  match.noise = objective.noise;
  match.payoffs = objective.payoffs;
  CheckMatchConfig(match);
  for (const StrategySpec& spec : objective.pool) {
    if (const auto v = Validate(spec); !v.empty()) {
      throw InvalidSpecError(
          fmt::format("invalid pool strategy '{}': {}", spec.name, v.front()));
    }
  }
}

double Evaluate(const StrategySpec& candidate, const Objective& objective,
                std::uint64_t seed) {
  const std::size_t pool = objective.pool.size();
  if (pool == 0) throw std::invalid_argument("opponent pool is empty");
  const bool candidate_stochastic = Describe(candidate).stochastic;

  if (objective.kind == ObjectiveKind::kMoranFixation) {
    StrategySpec mutant = candidate;
    mutant.name = kCandidateName;
    MoranConfig moran;
    moran.turns = objective.turns;
    moran.noise = objective.noise;
    moran.payoffs = objective.payoffs;
    int fixations = 0;
    for (std::size_t k = 0; k < pool; ++k) {
      moran.population = {mutant, objective.pool[k], objective.pool[k],
                          objective.pool[k]};
      for (int r = 0; r < objective.repetitions; ++r) {
        moran.seed = DeriveSeed(seed, {k, static_cast<std::uint64_t>(r)});
        const MoranOutcome o = RunMoran(moran);
        if (o.winner && *o.winner == kCandidateName) ++fixations;
      }
    }
    return static_cast<double>(fixations) /
           (static_cast<double>(pool) * objective.repetitions);
  }

  MatchConfig match;
  match.turns = objective.turns;
  match.noise = objective.noise;
  match.payoffs = objective.payoffs;
  double total = 0.0;
  for (std::size_t k = 0; k < pool; ++k) {
    const StrategySpec& opponent = objective.pool[k];
    const bool repeatable = objective.noise == 0.0 && !candidate_stochastic &&
                            !Describe(opponent).stochastic;
    const int reps = repeatable ? 1 : objective.repetitions;
    std::int64_t sum = 0;
    for (int r = 0; r < reps; ++r) {
      match.seed = DeriveSeed(seed, {k, static_cast<std::uint64_t>(r)});
      const MatchOutcome o = PlayMatch(candidate, opponent, match);
      sum += objective.kind == ObjectiveKind::kPayoffDifference
                 ? o.score_a - o.score_b
                 : o.score_a;
    }
    total += static_cast<double>(sum) /
             (static_cast<double>(reps) * objective.turns);
  }
  return total / static_cast<double>(pool);
}

double Evaluate(const Genome& genome, const Objective& objective,
                std::uint64_t seed) {
  return Evaluate(Decode(genome), objective, seed);
}

std::string TraceCsv(const std::vector<TraceRow>& trace) {
  std::string out = "generation,best,mean,std\n";
  for (const TraceRow& row : trace) {
    out += fmt::format("{},{},{},{}\n", row.generation, FormatReal(row.best),
                       FormatReal(row.mean), FormatReal(row.stddev));
  }
  return out;
}

// Evolution.

void CheckEvoConfig(const EvoConfig& config) {
  if (config.population_size < 2) {
    throw std::invalid_argument("population size must be >= 2");
  }
  if (config.elite_count < 1 || config.elite_count >= config.population_size) {
    throw std::invalid_argument("elite count must be in [1, population size)");
  }
  if (!(config.mutation_rate >= 0.0 && config.mutation_rate <= 1.0)) {
    throw std::invalid_argument("mutation rate must be in [0, 1]");
  }
  if (config.generations < 1) throw std::invalid_argument("generations must be >= 1");
  if (config.stop_after < 0) throw std::invalid_argument("stop_after must be >= 0");
}

std::uint64_t EvoConfigHash(const GenomeShape& shape, const Objective& objective,
                            const EvoConfig& config) {
  std::string text = fmt::format(
      "shape {} {} {} {} {} {}\nobjective {} {} {} {} {} {} {} {}\n"
      "evo {} {} {} {} {} {} {}\n",
      ArchetypeKey(shape.archetype), shape.lookup.n1, shape.lookup.m1,
      shape.lookup.m2, shape.hidden_width, shape.num_states,
      ObjectiveKey(objective.kind), objective.turns, FormatReal(objective.noise),
      objective.repetitions, objective.payoffs.reward, objective.payoffs.sucker,
      objective.payoffs.temptation, objective.payoffs.punishment,
      config.population_size, FormatReal(config.mutation_rate), config.elite_count,
      config.generations, config.crossover, config.seed, config.frozen_seed);
  for (const StrategySpec& spec : objective.pool) text += Fingerprintable(spec);
  return Fingerprint(text);
}

namespace {

TraceRow Summarize(int generation, const std::vector<double>& fitness,
                   double best) {
  TraceRow row;
  row.generation = generation;
  row.best = best;
  double sum = 0.0;
  for (double f : fitness) sum += f;
  row.mean = sum / static_cast<double>(fitness.size());
  double squares = 0.0;
  for (double f : fitness) squares += (f - row.mean) * (f - row.mean);
  row.stddev = std::sqrt(squares / static_cast<double>(fitness.size()));
  return row;
}

}  // namespace

EvoResult Evolve(const GenomeShape& shape, const Objective& objective,
                 const EvoConfig& config, const EvoOptions& options) {
  CheckShape(shape);
  CheckObjective(objective);
  CheckEvoConfig(config);
  const std::uint64_t hash = EvoConfigHash(shape, objective, config);
  const auto size = static_cast<std::size_t>(config.population_size);
  const auto elites = static_cast<std::size_t>(config.elite_count);

  EvoCheckpoint state;
  state.config_hash = hash;
  bool have_best = false;
  if (options.resume) {
    state = *options.resume;
    if (state.config_hash != hash) {
      throw std::invalid_argument(
          "checkpoint was written by a run with different settings");
    }
    if (state.population.size() != size) {
      throw std::invalid_argument("checkpoint population has the wrong size");
    }
    for (const Genome& g : state.population) {
      if (!(g.shape == shape)) {
        throw std::invalid_argument("checkpoint genome has the wrong shape");
      }
    }
    have_best = state.generation > 0;
  } else {
    RandomStream init(DeriveSeed(config.seed, {kInitTag}));
    for (const Genome& g : options.seeds) {
      if (state.population.size() == size) break;
      if (!(g.shape == shape)) throw std::invalid_argument("seed genome has the wrong shape");
      state.population.push_back(g);
    }
    while (state.population.size() < size) {
      state.population.push_back(RandomGenome(shape, init));
    }
  }

  std::vector<StrategySpec> specs(size);
  std::vector<double> fitness(size);
  int ran = 0;
  while (state.generation < config.generations) {
    if (config.stop_after > 0 && ran >= config.stop_after) break;
    const int gen = state.generation;
    const std::uint64_t eval_seed =
        config.frozen_seed
            ? DeriveSeed(config.seed, {kEvalTag})
            : DeriveSeed(config.seed, {kEvalTag, static_cast<std::uint64_t>(gen)});
    ParallelFor(size, config.workers, [&](std::size_t i) {
      fitness[i] = Evaluate(Decode(state.population[i]), objective, eval_seed);
    });

    std::vector<std::size_t> order(size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return fitness[a] > fitness[b];
    });
    if (!have_best || fitness[order[0]] > state.best_fitness) {
      state.best = state.population[order[0]];
      state.best_fitness = fitness[order[0]];
      have_best = true;
    }
    state.trace.push_back(Summarize(gen, fitness, fitness[order[0]]));

    RandomStream vary(DeriveSeed(config.seed, {kVaryTag, static_cast<std::uint64_t>(gen)}));
    std::vector<Genome> next;
    next.reserve(size);
    for (std::size_t e = 0; e < elites; ++e) next.push_back(state.population[order[e]]);
    const int e = config.elite_count;
    while (next.size() < size) {
      Genome child = state.population[order[vary.UniformInt(e)]];
      if (config.crossover) {
        child = Crossover(child, state.population[order[vary.UniformInt(e)]], vary);
      }
      next.push_back(Mutate(child, config.mutation_rate, vary));
    }
    state.population = std::move(next);
    state.generation = gen + 1;
    ++ran;
    if (options.checkpoint_path) {
      WriteFileAtomically(*options.checkpoint_path, SerializeCheckpoint(state));
    }
  }

  EvoResult result;
  result.best = state.best;
  result.best_fitness = state.best_fitness;
  result.trace = state.trace;
  result.complete = state.generation >= config.generations;
  return result;
}

// Checkpoints.

std::string SerializeCheckpoint(const EvoCheckpoint& checkpoint) {
  std::string out = fmt::format("ipd-checkpoint {}\n", kSpecFormatVersion);
  out += fmt::format("config {:016x}\n", checkpoint.config_hash);
  out += fmt::format("generation {}\n", checkpoint.generation);
  out += fmt::format("best_fitness {}\n", FormatReal(checkpoint.best_fitness));
  out += fmt::format("trace {}\n", checkpoint.trace.size());
  for (const TraceRow& row : checkpoint.trace) {
    out += fmt::format("{} {} {} {}\n", row.generation, FormatReal(row.best),
                       FormatReal(row.mean), FormatReal(row.stddev));
  }
  out += fmt::format("population {}\n", checkpoint.population.size());
  // The best genome comes first, then the population, as strategy blocks.
  const bool has_best = !checkpoint.best.genes.empty();
  out += fmt::format("best {}\n", has_best ? 1 : 0);
  if (has_best) out += Serialize(Decode(checkpoint.best, "best"));
  for (std::size_t i = 0; i < checkpoint.population.size(); ++i) {
    out += Serialize(Decode(checkpoint.population[i], fmt::format("individual {}", i)));
  }
  return out;
}

EvoCheckpoint DeserializeCheckpoint(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::size_t line_number = 0;
  std::string line;
  const auto next = [&](std::string_view field) {
    if (!std::getline(in, line)) {
      throw ParseError(line_number + 1, std::string(field),
                       "unexpected end of input, missing field");
    }
    ++line_number;
    std::istringstream fields(line);
    std::string key;
    fields >> key;
    if (!field.empty() && key != field) {
      throw ParseError(line_number, std::string(field),
                       fmt::format("expected '{}', found '{}'", field, key));
    }
    return fields;
  };
  const auto fail = [&](std::string_view field) {
    return ParseError(line_number, std::string(field), "malformed value");
  };

  EvoCheckpoint c;
  {
    auto f = next("ipd-checkpoint");
    int version = 0;
    if (!(f >> version) || version != kSpecFormatVersion) {
      throw ParseError(line_number, "ipd-checkpoint", "unsupported format version");
    }
  }
  {
    auto f = next("config");
    std::string hex;
    if (!(f >> hex)) throw fail("config");
    try {
      c.config_hash = std::stoull(hex, nullptr, 16);
    } catch (const std::exception&) {
      throw fail("config");
    }
  }
  if (!(next("generation") >> c.generation) || c.generation < 0) throw fail("generation");
  {
    auto f = next("best_fitness");
    std::string v;
    if (!(f >> v)) throw fail("best_fitness");
    try {
      c.best_fitness = std::stod(v);
    } catch (const std::exception&) {
      throw fail("best_fitness");
    }
  }
  std::size_t rows = 0;
  if (!(next("trace") >> rows)) throw fail("trace");
  for (std::size_t r = 0; r < rows; ++r) {
    auto f = next("");
    std::istringstream values(line);
    TraceRow row;
    std::string b, m, s;
    if (!(values >> row.generation >> b >> m >> s)) throw fail("trace");
    try {
      row.best = std::stod(b);
      row.mean = std::stod(m);
      row.stddev = std::stod(s);
    } catch (const std::exception&) {
      throw fail("trace");
    }
    c.trace.push_back(row);
  }
  std::size_t population = 0;
  if (!(next("population") >> population)) throw fail("population");
  int has_best = 0;
  if (!(next("best") >> has_best) || (has_best != 0 && has_best != 1)) throw fail("best");

  std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<StrategySpec> specs;
  try {
    specs = DeserializeAll(rest);
  } catch (const ParseError& e) {
    throw ParseError(line_number + e.line(), e.field(), "in strategy block");
  }
  if (specs.size() != population + static_cast<std::size_t>(has_best)) {
    throw ParseError(line_number, "population",
                     fmt::format("expected {} strategy blocks, found {}",
                                 population + has_best, specs.size()));
  }
  std::size_t k = 0;
  if (has_best) c.best = Encode(specs[k++]);
  for (; k < specs.size(); ++k) c.population.push_back(Encode(specs[k]));
  return c;
}

// Particle swarm.

void CheckPsoConfig(const PsoConfig& config, std::size_t dimensions) {
  if (dimensions == 0) throw std::invalid_argument("swarm needs >= 1 dimension");
  if (config.swarm_size < 1) throw std::invalid_argument("swarm size must be >= 1");
  if (config.iterations < 0) throw std::invalid_argument("iterations must be >= 0");
  if (!(config.inertia >= 0.0) || !(config.cognitive >= 0.0) ||
      !(config.social >= 0.0)) {
    throw std::invalid_argument("swarm coefficients must be non-negative");
  }
  if (config.lower.size() != config.upper.size() ||
      (!config.lower.empty() && config.lower.size() != dimensions)) {
    throw std::invalid_argument("bounds do not match the dimension count");
  }
  for (std::size_t d = 0; d < config.lower.size(); ++d) {
    if (!std::isfinite(config.lower[d]) || !std::isfinite(config.upper[d]) ||
        config.lower[d] > config.upper[d]) {
      throw std::invalid_argument(fmt::format("bad bounds for dimension {}", d));
    }
  }
}

PsoResult PsoMaximize(std::size_t dimensions,
                      const std::function<double(std::span<const double>)>& f,
                      const PsoConfig& config) {
  CheckPsoConfig(config, dimensions);
  const std::vector<double> lo =
      config.lower.empty() ? std::vector<double>(dimensions, 0.0) : config.lower;
  const std::vector<double> hi =
      config.upper.empty() ? std::vector<double>(dimensions, 1.0) : config.upper;
  const auto swarm = static_cast<std::size_t>(config.swarm_size);
  RandomStream rng(config.seed);

  std::vector<std::vector<double>> x(swarm, std::vector<double>(dimensions));
  std::vector<std::vector<double>> v = x;
  for (std::size_t p = 0; p < swarm; ++p) {
    for (std::size_t d = 0; d < dimensions; ++d) {
      const double span = hi[d] - lo[d];
      x[p][d] = lo[d] + span * rng.Uniform();
      v[p][d] = -span + 2.0 * span * rng.Uniform();
    }
  }
  std::vector<double> value(swarm);
  const auto evaluate = [&] {
    ParallelFor(swarm, config.workers, [&](std::size_t p) { value[p] = f(x[p]); });
  };
  evaluate();
  std::vector<std::vector<double>> personal = x;
  std::vector<double> personal_value = value;
  std::size_t leader = static_cast<std::size_t>(
      std::max_element(value.begin(), value.end()) - value.begin());
  PsoResult result;
  result.best = x[leader];
  result.best_value = value[leader];
  result.trace.push_back(Summarize(0, value, result.best_value));

  for (int it = 1; it <= config.iterations; ++it) {
    for (std::size_t p = 0; p < swarm; ++p) {
      for (std::size_t d = 0; d < dimensions; ++d) {
        const double rp = rng.Uniform();
        const double rg = rng.Uniform();
        v[p][d] = config.inertia * v[p][d] +
                  config.cognitive * rp * (personal[p][d] - x[p][d]) +
                  config.social * rg * (result.best[d] - x[p][d]);
        x[p][d] = std::clamp(x[p][d] + v[p][d], lo[d], hi[d]);
      }
    }
    evaluate();
    for (std::size_t p = 0; p < swarm; ++p) {
      if (value[p] > personal_value[p]) {
        personal[p] = x[p];
        personal_value[p] = value[p];
      }
      if (value[p] > result.best_value) {
        result.best = x[p];
        result.best_value = value[p];
      }
    }
    result.trace.push_back(Summarize(it, value, result.best_value));
  }
  return result;
}

PsoGamblerResult PsoGambler(const LookupShape& shape, const Objective& objective,
                            const PsoConfig& config) {
  CheckShape({Archetype::kGambler, shape, 0, 0});
  CheckObjective(objective);
  const std::uint64_t eval_seed = DeriveSeed(config.seed, {kEvalTag});
  const auto f = [&](std::span<const double> p) {
    StrategySpec spec;
    spec.name = "Trained";
    spec.body = GamblerSpec{shape, std::vector<double>(p.begin(), p.end())};
    return Evaluate(spec, objective, eval_seed);
  };
  PsoResult r = PsoMaximize(shape.table_size(), f, config);
  return {GamblerSpec{shape, std::move(r.best)}, r.best_value, std::move(r.trace)};
}

}  // namespace ipd
