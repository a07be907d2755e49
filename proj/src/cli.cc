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

#include "ipd/cli.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <span>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "CLI11.hpp"
#include "ipd/parallel.h"
#include "ipd/report.h"
#include "ipd/serialization.h"
#include "ipd/tournament.h"
#include "ipd/training.h"

namespace ipd::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Settings.

struct Field {
  const char* key;
  const char* fallback;
};

constexpr Field kTournamentFields[] = {
    {"tournament.roster", "default"},
    {"tournament.turns", "200"},
    {"tournament.noise", "0"},
    {"tournament.repetitions", "100"},
    {"tournament.seed", "0"},
    {"tournament.self_play", "false"},
};

constexpr Field kTrainFields[] = {
    {"train.name", "Trained"},
    {"train.archetype", "lookerup"},
    {"train.n1", "0"},
    {"train.m1", "1"},
    {"train.m2", "2"},
    {"train.hidden_width", "10"},
    {"train.states", "8"},
    {"train.method", "ea"},
    {"train.objective", "mean_payoff"},
    {"train.seed", "0"},
    {"pool.roster", "default"},
    {"pool.turns", "200"},
    {"pool.noise", "0"},
    {"pool.repetitions", "10"},
    {"ea.population", "40"},
    {"ea.mutation_rate", "0.1"},
    {"ea.elites", "10"},
    {"ea.generations", "500"},
    {"ea.crossover", "true"},
    {"ea.frozen_seed", "false"},
    {"pso.swarm", "20"},
    {"pso.inertia", "0.7"},
    {"pso.cognitive", "1.5"},
    {"pso.social", "1.5"},
    {"pso.iterations", "100"},
};

class Settings {
 public:
  explicit Settings(std::span<const Field> fields) : fields_(fields) {
    for (const Field& f : fields_) values_[f.key] = f.fallback;
  }

  void Set(const std::string& key, const std::string& value) {
    if (!values_.contains(key)) {
      std::vector<std::string> keys;
      for (const Field& f : fields_) keys.emplace_back(f.key);
      throw ConfigError(fmt::format("unknown setting '{}' (did you mean '{}'?)", key,
                                    NearestNames(key, keys, 1).front()));
    }
    values_[key] = value;
  }

  // INI sections, or the "config" object of a manifest.json.
  void Load(const fs::path& path) {
    if (!fs::exists(path)) {
      throw ConfigError(fmt::format("config file '{}' not found", path.string()));
    }
    if (path.extension() == ".json") {
      ordered_json manifest;
      try {
        manifest = ordered_json::parse(ReadFile(path));
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
      }
      if (!manifest.contains("config") || !manifest["config"].is_object()) {
        throw ConfigError(fmt::format("{}: no 'config' object", path.string()));
      }
      for (const auto& [section, body] : manifest["config"].items()) {
        if (!body.is_object()) {
          throw ConfigError(fmt::format("{}: section '{}' is not an object",
                                        path.string(), section));
        }
        for (const auto& [key, value] : body.items()) {
          Set(section + "." + key,
              value.is_string() ? value.get<std::string>() : value.dump());
        }
      }
      return;
    }
    boost::property_tree::ptree tree;
    try {
      boost::property_tree::read_ini(path.string(), tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw ConfigError(e.what());
    }
    for (const auto& [section, body] : tree) {
      if (body.empty()) {
        throw ConfigError(fmt::format("{}: setting '{}' is outside a section",
                                      path.string(), section));
      }
      for (const auto& [key, value] : body) Set(section + "." + key, value.data());
    }
  }

  const std::string& Get(std::string_view key) const {
    return values_.at(std::string(key));
  }

  std::string String(std::string_view key) const { return Get(key); }

  std::int64_t Int(std::string_view key, std::int64_t low, std::int64_t high) const {
    const std::string& s = Get(key);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError(fmt::format("{}: '{}' is not an integer", key, s));
    }
    if (v < low || v > high) {
      throw ConfigError(fmt::format("{}: {} is outside [{}, {}]", key, v, low, high));
    }
    return v;
  }

  std::uint64_t Seed(std::string_view key) const {
    const std::string& s = Get(key);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError(fmt::format("{}: '{}' is not an unsigned integer", key, s));
    }
    return v;
  }

  double Real(std::string_view key, double low, double high) const {
    const std::string& s = Get(key);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw ConfigError(fmt::format("{}: '{}' is not a number", key, s));
    }
    if (v < low || v > high) {
      throw ConfigError(fmt::format("{}: {} is outside [{}, {}]", key, s, FormatReal(low),
                                    FormatReal(high)));
    }
    return v;
  }

  bool Bool(std::string_view key) const {
    const std::string& s = Get(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, s));
  }

  // The resolved settings as INI text, in field order.
  std::string Ini() const {
    std::string out;
    std::string section;
    for (const Field& f : fields_) {
      const std::string_view key = f.key;
      const auto dot = key.find('.');
      const std::string_view s = key.substr(0, dot);
      if (s != section) {
        if (!section.empty()) out += "\n";
        section = s;
        out += fmt::format("[{}]\n", section);
      }
      out += fmt::format("{} = {}\n", key.substr(dot + 1), values_.at(f.key));
    }
    return out;
  }

  ordered_json Json() const {
    ordered_json j = ordered_json::object();
    for (const Field& f : fields_) {
      const std::string_view key = f.key;
      const auto dot = key.find('.');
      j[std::string(key.substr(0, dot))][std::string(key.substr(dot + 1))] =
          values_.at(f.key);
    }
    return j;
  }

 private:
  std::span<const Field> fields_;
  std::map<std::string, std::string> values_;
};

// Flags that override settings, applied after the config file.
struct Overrides {
  std::vector<std::pair<std::string, std::string>> values;
  void Add(CLI::App* app, const std::string& flag, const std::string& key,
           const std::string& help) {
    app->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { values.emplace_back(key, v); }, help);
  }
  void AddFlag(CLI::App* app, const std::string& flag, const std::string& key,
               const std::string& value, const std::string& help) {
    app->add_flag_callback(
        flag, [this, key, value] { values.emplace_back(key, value); }, help);
  }
};

struct Common {
  std::string config_file;
  std::string output_dir;
  int workers = 0;
};

void AddCommon(CLI::App* app, Common& common) {
  app->add_option("--config", common.config_file,
                  "INI config file, or a manifest.json from an earlier run");
  app->add_option("-o,--output-dir", common.output_dir,
                  fmt::format("Output directory (default ${} or ./ipd-output)",
                              kOutputDirEnv));
  app->add_option("--workers", common.workers,
                  "Worker threads (0 = one per processor); never changes results")
      ->check(CLI::NonNegativeNumber);
}

Settings Resolve(std::span<const Field> fields, const Common& common,
                 const Overrides& overrides) {
  Settings settings(fields);
  if (!common.config_file.empty()) settings.Load(common.config_file);
  for (const auto& [key, value] : overrides.values) settings.Set(key, value);
  return settings;
}

fs::path OutputDir(const Common& common) {
  if (!common.output_dir.empty()) return common.output_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
    return env;
  }
  return "ipd-output";
}

void WriteManifest(const fs::path& dir, std::string_view command,
                   const std::vector<std::string>& args, const Settings& settings,
                   std::uint64_t seed, const std::vector<fs::path>& artifacts,
                   int workers, double seconds) {
  ordered_json m;
  m["format_version"] = kManifestFormatVersion;
  m["command"] = std::string(command);
  m["arguments"] = std::vector<std::string>(args.begin() + 1, args.end());
  m["config"] = settings.Json();
  m["seed"] = seed;
  m["corpus_hash"] = Registry::Default().Hash();
  std::vector<std::string> names;
  for (const fs::path& p : artifacts) names.push_back(p.lexically_relative(dir).string());
  m["artifacts"] = names;
  m["workers"] = workers <= 0 ? DefaultWorkers() : workers;
  m["duration_seconds"] = seconds;
  WriteFileAtomically(dir / kManifestFile, m.dump(2) + "\n");
}

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Commands.

int CmdTournament(const std::vector<std::string>& args, const Common& common,
                  const Overrides& overrides, std::size_t top_n, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const Settings s = Resolve(kTournamentFields, common, overrides);
  TournamentConfig config;
  config.roster = ResolveRoster(s.String("tournament.roster"), Registry::Default());
  config.turns = static_cast<int>(s.Int("tournament.turns", 1, 1'000'000));
  config.noise = s.Real("tournament.noise", 0.0, 1.0);
  config.repetitions = static_cast<int>(s.Int("tournament.repetitions", 1, 1'000'000));
  config.seed = s.Seed("tournament.seed");
  config.include_self_play = s.Bool("tournament.self_play");
  config.workers = common.workers;
  try {
    CheckTournamentConfig(config);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const TournamentResult result = RunTournament(config);
  const fs::path dir = OutputDir(common);
  std::vector<fs::path> written =
      WriteTournamentArtifacts(result, dir, Registry::Default().Hash());
  WriteFileAtomically(dir / kConfigEcho, s.Ini());
  written.push_back(dir / kConfigEcho);
  out << SummaryTable(Summarize(result, std::min(top_n, result.size())));
  WriteManifest(dir, "tournament", args, s, config.seed, written, common.workers,
                SecondsSince(start));
  out << fmt::format("wrote {} artifacts to {}\n", written.size() + 1, dir.string());
  return kExitOk;
}

GenomeShape ShapeFrom(const Settings& s) {
  GenomeShape shape;
  const auto archetype = ParseArchetype(s.String("train.archetype"));
  if (!archetype) {
    throw ConfigError(fmt::format(
        "train.archetype: unknown archetype '{}' (lookerup, gambler, ann, fsm, hmm, "
        "memoryone)",
        s.String("train.archetype")));
  }
  shape.archetype = *archetype;
  shape.lookup = {static_cast<int>(s.Int("train.n1", 0, 8)),
                  static_cast<int>(s.Int("train.m1", 0, 8)),
                  static_cast<int>(s.Int("train.m2", 0, 8))};
  if (shape.lookup.key_length() > 12) {
    throw ConfigError("train.n1 + train.m1 + train.m2 must be <= 12");
  }
  if (shape.archetype == Archetype::kAnn) {
    shape.hidden_width = static_cast<int>(s.Int("train.hidden_width", 1, 1000));
  }
  if (shape.archetype == Archetype::kFsm || shape.archetype == Archetype::kHmm) {
    shape.num_states = static_cast<int>(s.Int("train.states", 1, 1000));
  }
  if (shape.archetype != Archetype::kLookerUp && shape.archetype != Archetype::kGambler) {
    shape.lookup = {};
  }
  return shape;
}

int CmdTrain(const std::vector<std::string>& args, const Common& common,
             const Overrides& overrides, bool resume, int stop_after,
             std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const Settings s = Resolve(kTrainFields, common, overrides);
  const GenomeShape shape = ShapeFrom(s);
  const std::string name = s.String("train.name");
  if (name.empty()) throw ConfigError("train.name must not be empty");

  Objective objective;
  const auto kind = ParseObjective(s.String("train.objective"));
  if (!kind) {
    throw ConfigError(fmt::format(
        "train.objective: unknown objective '{}' (mean_payoff, payoff_difference, "
        "moran)",
        s.String("train.objective")));
  }
  objective.kind = *kind;
  objective.pool = ResolveRoster(s.String("pool.roster"), Registry::Default());
  objective.turns = static_cast<int>(s.Int("pool.turns", 1, 1'000'000));
  objective.noise = s.Real("pool.noise", 0.0, 1.0);
  objective.repetitions = static_cast<int>(s.Int("pool.repetitions", 1, 1'000'000));
  try {
    CheckObjective(objective);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const std::string method = s.String("train.method");
  const std::uint64_t seed = s.Seed("train.seed");
  const fs::path dir = OutputDir(common);
  const fs::path checkpoint = dir / "checkpoint.txt";
  std::vector<fs::path> written;
  StrategySpec best;
  double best_fitness = 0.0;
  std::vector<TraceRow> trace;
  bool complete = true;

  if (method == "ea") {
    EvoConfig config;
    config.population_size = static_cast<int>(s.Int("ea.population", 2, 100'000));
    config.mutation_rate = s.Real("ea.mutation_rate", 0.0, 1.0);
    config.elite_count = static_cast<int>(s.Int("ea.elites", 1, 100'000));
    config.generations = static_cast<int>(s.Int("ea.generations", 1, 10'000'000));
    config.crossover = s.Bool("ea.crossover");
    config.frozen_seed = s.Bool("ea.frozen_seed");
    config.seed = seed;
    config.workers = common.workers;
    config.stop_after = stop_after;
    try {
      CheckEvoConfig(config);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    out << fmt::format(
        "evolving {} with population {}, mutation rate {}, elites {}, generations {}, "
        "crossover {}\n",
        ArchetypeKey(shape.archetype), config.population_size,
        FormatReal(config.mutation_rate), config.elite_count, config.generations,
        config.crossover ? "on" : "off");

    EvoOptions options;
    options.checkpoint_path = checkpoint;
    if (resume) {
      if (!fs::exists(checkpoint)) {
        throw ConfigError(fmt::format("--resume: no checkpoint at {}", checkpoint.string()));
      }
      try {
        options.resume = DeserializeCheckpoint(ReadFile(checkpoint));
      } catch (const ParseError& e) {
        throw ConfigError(fmt::format("{}: {}", checkpoint.string(), e.what()));
      }
      if (options.resume->config_hash != EvoConfigHash(shape, objective, config)) {
        throw ConfigError(
            "--resume: the checkpoint was written with different settings");
      }
      out << fmt::format("resuming after generation {}\n", options.resume->generation);
    }
    fs::create_directories(dir);
    const EvoResult r = Evolve(shape, objective, config, options);
    best = Decode(r.best, name);
    best_fitness = r.best_fitness;
    trace = r.trace;
    complete = r.complete;
    written.push_back(checkpoint);
  } else if (method == "pso") {
    if (shape.archetype != Archetype::kGambler) {
      throw ConfigError("train.method pso needs train.archetype gambler");
    }
    PsoConfig config;
    config.swarm_size = static_cast<int>(s.Int("pso.swarm", 1, 100'000));
    config.inertia = s.Real("pso.inertia", 0.0, 100.0);
    config.cognitive = s.Real("pso.cognitive", 0.0, 100.0);
    config.social = s.Real("pso.social", 0.0, 100.0);
    config.iterations = static_cast<int>(s.Int("pso.iterations", 0, 10'000'000));
    config.seed = seed;
    config.workers = common.workers;
    out << fmt::format("particle swarm over gambler ({}, {}, {}), swarm {}, {} iterations\n",
                       shape.lookup.n1, shape.lookup.m1, shape.lookup.m2,
                       config.swarm_size, config.iterations);
    const PsoGamblerResult r = PsoGambler(shape.lookup, objective, config);
    best.name = name;
    best.trained = true;
    best.body = r.best;
    best_fitness = r.best_fitness;
    trace = r.trace;
  } else {
    throw ConfigError(fmt::format("train.method: unknown method '{}' (ea, pso)", method));
  }

  WriteFileAtomically(dir / "best.spec", Serialize(best));
  WriteFileAtomically(dir / "trace.csv", TraceCsv(trace));
  WriteFileAtomically(dir / kConfigEcho, s.Ini());
  written.insert(written.end(), {dir / "best.spec", dir / "trace.csv", dir / kConfigEcho});
  std::sort(written.begin(), written.end());
  WriteManifest(dir, "train", args, s, seed, written, common.workers, SecondsSince(start));
  if (!complete) {
    out << fmt::format("stopped after generation {}; continue with --resume\n",
                       trace.empty() ? 0 : trace.back().generation + 1);
  }
  out << fmt::format("best fitness {} ({} {})\nwrote {}\n", FormatReal(best_fitness),
                     ObjectiveKey(objective.kind), complete ? "final" : "so far",
                     (dir / "best.spec").string());
  return kExitOk;
}

int CmdReport(const std::string& result_dir, const Common& common, std::size_t top_n,
              const std::vector<std::string>& players, bool figures, std::ostream& out) {
  TournamentResult result;
  try {
    result = LoadTournamentResult(result_dir);
  } catch (const std::exception& e) {
    throw ConfigError(fmt::format("cannot read results in '{}': {}", result_dir, e.what()));
  }
  for (const std::string& p : players) {
    if (result.IndexOf(p) < 0) {
      throw ConfigError(fmt::format("no player '{}' in these results; nearest: {}", p,
                                    fmt::join(NearestNames(p, result.players), ", ")));
    }
  }
  const fs::path dir = common.output_dir.empty() ? fs::path(result_dir) : OutputDir(common);
  const std::size_t n = std::min(top_n, result.size());
  const std::string table =
      fmt::format("Top {} of {} by median score over {} repetitions\n", n, result.size(),
                  result.repetitions) +
      SummaryTable(Summarize(result, n));
  out << table;
  WriteFileAtomically(dir / fmt::format("top{}.txt", n), table);
  if (figures) {
    WriteFileAtomically(dir / artifacts::kScoresSvg,
                        RenderMetricDistribution(result, Metric::kScore));
    WriteFileAtomically(dir / artifacts::kWinsSvg,
                        RenderMetricDistribution(result, Metric::kWins));
    WriteFileAtomically(dir / artifacts::kRanksSvg,
                        RenderMetricDistribution(result, Metric::kRank));
    WriteFileAtomically(dir / artifacts::kHeatmapSvg, RenderPayoffHeatmap(result));
    std::vector<std::string> chosen = players;
    if (chosen.empty()) chosen.push_back(result.players[OrderByMedianScore(result)[0]]);
    for (const std::string& p : chosen) {
      const fs::path path = dir / fmt::format("cooperation_{}.svg", Slug(p));
      WriteFileAtomically(path, RenderCooperationMap(result, p));
      out << fmt::format("wrote {}\n", path.string());
    }
  }
  return kExitOk;
}

int CmdListStrategies(bool show_hash, std::ostream& out) {
  const Registry& registry = Registry::Default();
  if (show_hash) {
    out << registry.Hash() << "\n";
    return kExitOk;
  }
  out << registry.ToCsv();
  return kExitOk;
}

int CmdValidateSpec(const std::vector<std::string>& files, std::ostream& out,
                    std::ostream& err) {
  int status = kExitOk;
  for (const std::string& file : files) {
    std::vector<StrategySpec> specs;
    try {
      specs = DeserializeAll(ReadFile(file));
    } catch (const ParseError& e) {
      err << fmt::format("{}:{}: {}\n", file, e.line(), e.what());
      status = kExitConfig;
      continue;
    } catch (const std::runtime_error& e) {
      err << fmt::format("{}: {}\n", file, e.what());
      status = kExitConfig;
      continue;
    }
    if (specs.empty()) {
      err << fmt::format("{}: no strategies\n", file);
      status = kExitConfig;
    }
    for (const StrategySpec& spec : specs) {
      const auto problems = Validate(spec);
      if (problems.empty()) {
        out << fmt::format("{}: ok: {} ({})\n", file, spec.name, ArchetypeName(spec.body));
        continue;
      }
      status = kExitConfig;
      for (const std::string& p : problems) {
        err << fmt::format("{}: {}: {}\n", file, spec.name, p);
      }
    }
  }
  return status;
}

}  // namespace

std::vector<StrategySpec> ResolveRoster(std::string_view roster,
                                        const Registry& registry) {
  std::vector<StrategySpec> out;
  std::size_t begin = 0;
  while (begin <= roster.size()) {
    std::size_t end = roster.find(',', begin);
    if (end == std::string_view::npos) end = roster.size();
    std::string_view entry = roster.substr(begin, end - begin);
    while (!entry.empty() && entry.front() == ' ') entry.remove_prefix(1);
    while (!entry.empty() && entry.back() == ' ') entry.remove_suffix(1);
    begin = end + 1;
    if (entry.empty()) continue;
    if (entry == "default") {
      const auto r = registry.DefaultRoster();
      out.insert(out.end(), r.begin(), r.end());
    } else if (entry == "all") {
      out.insert(out.end(), registry.specs().begin(), registry.specs().end());
    } else if (entry == "classics") {
      for (const StrategySpec& spec : registry.specs()) {
        if (std::holds_alternative<ClassicSpec>(spec.body)) out.push_back(spec);
      }
    } else if (const StrategySpec* spec = registry.Find(entry)) {
      out.push_back(*spec);
    } else if (fs::is_regular_file(fs::path(entry))) {
      try {
        const auto specs = DeserializeAll(ReadFile(fs::path(entry)));
        out.insert(out.end(), specs.begin(), specs.end());
      } catch (const ParseError& e) {
        throw ConfigError(fmt::format("{}:{}: {}", entry, e.line(), e.what()));
      }
    } else {
      throw ConfigError(fmt::format("unknown strategy '{}'; nearest names: {}", entry,
                                    fmt::join(registry.NearestNames(entry), ", ")));
    }
  }
  if (out.empty()) throw ConfigError("roster is empty");
  return out;
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Iterated prisoner's dilemma tournaments and strategy training", "ipd");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every command");

  Common common;
  Overrides overrides;
  std::size_t top_n = 15;

  CLI::App* tournament = app.add_subcommand("tournament", "Run a round-robin tournament");
  AddCommon(tournament, common);
  overrides.Add(tournament, "--roster", "tournament.roster",
                "Comma-separated names, default|classics|all, or spec files");
  overrides.Add(tournament, "--turns", "tournament.turns", "Turns per match");
  overrides.Add(tournament, "--noise", "tournament.noise", "Action flip probability");
  overrides.Add(tournament, "--repetitions", "tournament.repetitions",
                "Number of repetitions");
  overrides.Add(tournament, "--seed", "tournament.seed", "Root seed");
  overrides.AddFlag(tournament, "--self-play", "tournament.self_play", "true",
                    "Also play each strategy against itself");
  tournament->add_option("--top-n", top_n, "Rows in the printed summary");

  CLI::App* train = app.add_subcommand("train", "Train a strategy against a pool");
  AddCommon(train, common);
  bool resume = false;
  int stop_after = 0;
  overrides.Add(train, "--name", "train.name", "Name of the trained strategy");
  overrides.Add(train, "--archetype", "train.archetype",
                "lookerup, gambler, ann, fsm, hmm or memoryone");
  overrides.Add(train, "--n1", "train.n1", "Opponent opening moves in the lookup key");
  overrides.Add(train, "--m1", "train.m1", "Opponent recent moves in the lookup key");
  overrides.Add(train, "--m2", "train.m2", "Own recent moves in the lookup key");
  overrides.Add(train, "--hidden", "train.hidden_width", "ANN hidden width");
  overrides.Add(train, "--states", "train.states", "FSM or HMM state count");
  overrides.Add(train, "--method", "train.method", "ea or pso");
  overrides.Add(train, "--objective", "train.objective",
                "mean_payoff, payoff_difference or moran");
  overrides.Add(train, "--seed", "train.seed", "Root seed");
  overrides.Add(train, "--roster", "pool.roster", "Opponent pool");
  overrides.Add(train, "--turns", "pool.turns", "Turns per match");
  overrides.Add(train, "--noise", "pool.noise", "Action flip probability");
  overrides.Add(train, "--repetitions", "pool.repetitions",
                "Matches or Moran runs per opponent per evaluation");
  overrides.Add(train, "--population", "ea.population", "Population size");
  overrides.Add(train, "--mutation-rate", "ea.mutation_rate", "Per-gene mutation rate");
  overrides.Add(train, "--elites", "ea.elites", "Individuals kept each generation");
  overrides.Add(train, "--generations", "ea.generations", "Generations");
  overrides.AddFlag(train, "--no-crossover", "ea.crossover", "false",
                    "Mutation only");
  overrides.AddFlag(train, "--frozen-seed", "ea.frozen_seed", "true",
                    "Evaluate every generation with the same seed");
  overrides.Add(train, "--swarm", "pso.swarm", "Particles");
  overrides.Add(train, "--iterations", "pso.iterations", "Swarm iterations");
  train->add_flag("--resume", resume, "Continue from the checkpoint in the output dir");
  train->add_option("--stop-after", stop_after,
                    "Stop after this many generations (resume later)")
      ->check(CLI::NonNegativeNumber);

  CLI::App* report = app.add_subcommand("report", "Summarize a tournament result");
  std::string result_dir;
  std::vector<std::string> players;
  bool no_figures = false;
  report->add_option("results", result_dir, "Tournament output directory")->required();
  report->add_option("-o,--output-dir", common.output_dir,
                     "Where to write (default: the results directory)");
  report->add_option("--top-n", top_n, "Rows in the summary table");
  report->add_option("--player", players, "Player for a cooperation-rate map");
  report->add_flag("--no-figures", no_figures, "Only the summary table");

  CLI::App* list = app.add_subcommand("list-strategies", "List the built-in strategies");
  bool show_hash = false;
  list->add_flag("--hash", show_hash, "Print the corpus hash only");

  CLI::App* validate = app.add_subcommand("validate-spec", "Check strategy files");
  std::vector<std::string> files;
  validate->add_option("files", files, "Strategy files")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (!app.get_subcommands().empty()) {
      err << app.get_subcommands().front()->help();
    }
    return kExitConfig;
  }

  try {
    if (tournament->parsed()) return CmdTournament(args, common, overrides, top_n, out);
    if (train->parsed()) {
      return CmdTrain(args, common, overrides, resume, stop_after, out);
    }
    if (report->parsed()) {
      return CmdReport(result_dir, common, top_n, players, !no_figures, out);
    }
    if (list->parsed()) return CmdListStrategies(show_hash, out);
    if (validate->parsed()) return CmdValidateSpec(files, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidSpecError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace ipd::cli
