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
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "ipd/report.h"
#include "ipd/serialization.h"
#include "test_util.h"

namespace ipd {
namespace {

namespace fs = std::filesystem;

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation Ipd(std::vector<std::string> args) {
  args.insert(args.begin(), "ipd");
  std::ostringstream out, err;
  Invocation inv;
  inv.code = cli::Run(args, out, err);
  inv.out = out.str();
  inv.err = err.str();
  return inv;
}

// File name -> contents for every regular file in `dir`.
std::map<std::string, std::string> Files(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      files[entry.path().filename().string()] = ReadFile(entry.path());
    }
  }
  return files;
}

// Everything except the manifest, which records wall-clock time and workers.
std::map<std::string, std::string> Artifacts(const fs::path& dir) {
  auto files = Files(dir);
  files.erase(std::string(cli::kManifestFile));
  return files;
}

const std::vector<std::string> kSmallTournament = {
    "tournament", "--roster", "classics", "--turns", "50", "--repetitions", "3",
    "--noise", "0.05", "--seed", "7"};

std::vector<std::string> With(std::vector<std::string> base,
                              std::initializer_list<std::string> extra) {
  base.insert(base.end(), extra);
  return base;
}

TEST_CASE("tournament artifacts are byte-identical across worker counts and reruns") {
  const auto dir = testing::TempDir("cli_tournament");
  const Invocation a = Ipd(With(kSmallTournament, {"-o", (dir / "a").string(), "--workers", "1"}));
  REQUIRE(a.code == cli::kExitOk);
  const Invocation b = Ipd(With(kSmallTournament, {"-o", (dir / "b").string(), "--workers", "3"}));
  REQUIRE(b.code == cli::kExitOk);
  const auto files = Artifacts(dir / "a");
  for (const char* name :
       {artifacts::kRepetitions, artifacts::kPairwise, artifacts::kCooperation,
        artifacts::kSummary, artifacts::kScoresSvg, artifacts::kWinsSvg,
        artifacts::kRanksSvg, artifacts::kHeatmapSvg}) {
    CHECK(files.count(name) == 1);
  }
  CHECK(files == Artifacts(dir / "b"));
  CHECK(fs::exists(dir / "a" / cli::kManifestFile));
}

TEST_CASE("a manifest alone reproduces the run") {
  const auto dir = testing::TempDir("cli_manifest");
  REQUIRE(Ipd(With(kSmallTournament, {"-o", (dir / "a").string()})).code == 0);
  const auto manifest =
      nlohmann::json::parse(ReadFile(dir / "a" / cli::kManifestFile));
  CHECK(manifest["command"] == "tournament");
  CHECK(manifest["seed"] == 7);
  CHECK(manifest["format_version"] == cli::kManifestFormatVersion);
  CHECK(manifest.contains("corpus_hash"));
  CHECK(manifest.contains("duration_seconds"));
  CHECK(manifest["artifacts"].size() >= 8);
  REQUIRE(Ipd({"tournament", "--config", (dir / "a" / cli::kManifestFile).string(),
               "-o", (dir / "b").string()})
              .code == 0);
  CHECK(Artifacts(dir / "a") == Artifacts(dir / "b"));
  // The INI echo works as a config file too.
  REQUIRE(Ipd({"tournament", "--config", (dir / "a" / cli::kConfigEcho).string(), "-o",
               (dir / "c").string()})
              .code == 0);
  CHECK(Artifacts(dir / "a") == Artifacts(dir / "c"));
}

TEST_CASE("flags override the config file") {
  const auto dir = testing::TempDir("cli_precedence");
  WriteFileAtomically(dir / "run.ini",
                      "[tournament]\nroster = Cooperator,Defector\nturns = 10\n"
                      "repetitions = 2\n");
  REQUIRE(Ipd({"tournament", "--config", (dir / "run.ini").string(), "--turns", "4",
               "-o", (dir / "out").string()})
              .code == 0);
  const std::string echo = ReadFile(dir / "out" / cli::kConfigEcho);
  CHECK(echo.find("turns = 4\n") != std::string::npos);
  CHECK(echo.find("repetitions = 2\n") != std::string::npos);
  CHECK(ReadFile(dir / "out" / artifacts::kCooperation).find("t4\n") != std::string::npos);
}

TEST_CASE("config errors exit 2 with a diagnostic") {
  const auto dir = testing::TempDir("cli_errors");
  const Invocation unknown =
      Ipd({"tournament", "--roster", "Tit For Tatt,Defector", "-o", dir.string()});
  CHECK(unknown.code == cli::kExitConfig);
  CHECK(unknown.err.find("Tit For Tatt") != std::string::npos);
  CHECK(unknown.err.find("Tit For Tat,") != std::string::npos);

  WriteFileAtomically(dir / "bad.ini", "[tournament]\nturnz = 3\n");
  const Invocation key = Ipd({"tournament", "--config", (dir / "bad.ini").string()});
  CHECK(key.code == cli::kExitConfig);
  CHECK(key.err.find("turnz") != std::string::npos);

  CHECK(Ipd({"tournament", "--turns", "zero"}).code == cli::kExitConfig);
  CHECK(Ipd({"tournament", "--noise", "1.5"}).code == cli::kExitConfig);
  CHECK(Ipd({"tournament", "--roster", "Cooperator"}).code == cli::kExitConfig);
  CHECK(Ipd({"no-such-command"}).code == cli::kExitConfig);
  CHECK(Ipd({"train", "--archetype", "blob"}).code == cli::kExitConfig);
  CHECK(Ipd({"train", "--method", "pso", "--archetype", "fsm"}).code == cli::kExitConfig);
  CHECK(Ipd({"--help"}).code == cli::kExitOk);
}

TEST_CASE("report writes the top table and figures") {
  const auto dir = testing::TempDir("cli_report");
  REQUIRE(Ipd({"tournament", "--roster", "default", "--turns", "20", "--repetitions",
               "2", "-o", (dir / "run").string()})
              .code == 0);
  const Invocation r = Ipd({"report", (dir / "run").string(), "-o", (dir / "rep").string(),
                            "--player", "Tit For Tat"});
  REQUIRE(r.code == 0);
  const std::string table = ReadFile(dir / "rep" / "top15.txt");
  CHECK(table == r.out.substr(0, table.size()));
  // Title, column header and 15 rows sorted by median score.
  std::istringstream lines(table);
  std::string line;
  std::vector<double> medians;
  while (std::getline(lines, line)) {
    std::istringstream fields(line.substr(std::min<std::size_t>(31, line.size())));
    if (double median; std::isdigit(static_cast<unsigned char>(line[3])) && fields >> median) {
      medians.push_back(median);
    }
  }
  CHECK(medians.size() == 15);
  CHECK(std::is_sorted(medians.rbegin(), medians.rend()));
  for (const char* svg : {artifacts::kScoresSvg, artifacts::kWinsSvg,
                          artifacts::kRanksSvg, artifacts::kHeatmapSvg}) {
    CHECK(fs::exists(dir / "rep" / svg));
  }
  CHECK(fs::exists(dir / "rep" / "cooperation_tit_for_tat.svg"));

  const Invocation no_figs =
      Ipd({"report", (dir / "run").string(), "-o", (dir / "nf").string(), "--top-n",
           "3", "--no-figures"});
  CHECK(no_figs.code == 0);
  CHECK(fs::exists(dir / "nf" / "top3.txt"));
  CHECK_FALSE(fs::exists(dir / "nf" / artifacts::kScoresSvg));

  CHECK(Ipd({"report", (dir / "run").string(), "--player", "Nobody"}).code ==
        cli::kExitConfig);
  const auto empty = testing::TempDir("cli_report_empty");
  CHECK(Ipd({"report", empty.string()}).code == cli::kExitConfig);
}

TEST_CASE("train echoes the evolutionary defaults") {
  const auto dir = testing::TempDir("cli_train_defaults");
  const Invocation r = Ipd({"train", "--archetype", "lookerup", "--n1", "0", "--m1", "1",
                            "--m2", "1", "--roster", "Defector", "--stop-after", "1",
                            "-o", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("population 40, mutation rate 0.1, elites 10, generations 500") !=
        std::string::npos);
  const std::string echo = ReadFile(dir / cli::kConfigEcho);
  CHECK(echo.find("population = 40\n") != std::string::npos);
  CHECK(echo.find("generations = 500\n") != std::string::npos);
  CHECK(Deserialize(ReadFile(dir / "best.spec")).trained);
}

TEST_CASE("train selects the Moran objective") {
  const auto dir = testing::TempDir("cli_train_moran");
  const Invocation r = Ipd({"train", "--archetype", "memoryone", "--objective", "moran",
                            "--roster", "Defector,Cooperator", "--turns", "10",
                            "--repetitions", "2", "--population", "6", "--elites", "2",
                            "--generations", "2", "-o", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("(moran final)") != std::string::npos);
  CHECK(ReadFile(dir / cli::kConfigEcho).find("objective = moran\n") != std::string::npos);
}

std::vector<std::string> FrozenTrain(const fs::path& dir) {
  return {"train", "--archetype", "fsm", "--states", "3", "--roster",
          "Random: 0.5,Tit For Tat,Bully", "--noise", "0.05", "--turns", "40",
          "--repetitions", "2", "--population", "8", "--elites", "2", "--generations",
          "5", "--frozen-seed", "--seed", "5", "-o", dir.string()};
}

TEST_CASE("an interrupted training run resumes to the uninterrupted result") {
  const auto dir = testing::TempDir("cli_resume");
  REQUIRE(Ipd(FrozenTrain(dir / "full")).code == 0);
  const Invocation first = Ipd(With(FrozenTrain(dir / "split"), {"--stop-after", "2"}));
  REQUIRE(first.code == 0);
  CHECK(first.out.find("continue with --resume") != std::string::npos);
  const Invocation rest = Ipd(With(FrozenTrain(dir / "split"), {"--resume"}));
  REQUIRE(rest.code == 0);
  CHECK(rest.out.find("resuming after generation 2") != std::string::npos);
  CHECK(Artifacts(dir / "full") == Artifacts(dir / "split"));

  // A resume with different settings is refused.
  auto changed = With(FrozenTrain(dir / "split"), {"--resume"});
  changed[changed.size() - 4] = "6";
  CHECK(Ipd(changed).code == cli::kExitConfig);
  CHECK(Ipd(With(FrozenTrain(dir / "none"), {"--resume"})).code == cli::kExitConfig);
}

TEST_CASE("training output does not depend on the worker count") {
  const auto dir = testing::TempDir("cli_train_workers");
  REQUIRE(Ipd(With(FrozenTrain(dir / "a"), {"--workers", "1"})).code == 0);
  REQUIRE(Ipd(With(FrozenTrain(dir / "b"), {"--workers", "4"})).code == 0);
  CHECK(Artifacts(dir / "a") == Artifacts(dir / "b"));
}

TEST_CASE("particle swarm training writes a gambler") {
  const auto dir = testing::TempDir("cli_pso");
  REQUIRE(Ipd({"train", "--method", "pso", "--archetype", "gambler", "--n1", "0",
               "--m1", "1", "--m2", "1", "--roster", "Defector", "--swarm", "6",
               "--iterations", "5", "-o", dir.string()})
              .code == 0);
  const StrategySpec spec = Deserialize(ReadFile(dir / "best.spec"));
  CHECK(std::holds_alternative<GamblerSpec>(spec.body));
  CHECK(ReadFile(dir / "trace.csv").rfind("generation,best,mean,std\n", 0) == 0);
}

TEST_CASE("a trained spec file can join a tournament roster") {
  const auto dir = testing::TempDir("cli_spec_roster");
  const StrategySpec grim{"File Grim", false, LookerUpSpec{{0, 1, 1}, {kC, kD, kD, kD}}};
  WriteFileAtomically(dir / "grim.spec", Serialize(grim));
  REQUIRE(Ipd({"tournament", "--roster",
               "Cooperator," + (dir / "grim.spec").string(), "--turns", "5",
               "--repetitions", "1", "-o", (dir / "out").string()})
              .code == 0);
  CHECK(ReadFile(dir / "out" / artifacts::kRepetitions).find("File Grim,1,3,0,2\n") !=
        std::string::npos);
}

TEST_CASE("the output directory falls back to the environment") {
  const auto dir = testing::TempDir("cli_env");
  ::setenv(cli::kOutputDirEnv, (dir / "env").string().c_str(), 1);
  const Invocation r = Ipd({"tournament", "--roster", "Cooperator,Defector", "--turns",
                            "3", "--repetitions", "1"});
  ::unsetenv(cli::kOutputDirEnv);
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "env" / artifacts::kSummary));
}

TEST_CASE("list-strategies and validate-spec") {
  const Invocation list = Ipd({"list-strategies"});
  CHECK(list.code == 0);
  CHECK(list.out.find("\nTit For Tat,false,1,false\n") != std::string::npos);
  const Invocation hash = Ipd({"list-strategies", "--hash"});
  CHECK(hash.code == 0);
  CHECK(hash.out.size() == 17);

  const auto dir = testing::TempDir("cli_validate");
  const StrategySpec grim{"Grim", false, LookerUpSpec{{0, 1, 1}, {kC, kD, kD, kD}}};
  WriteFileAtomically(dir / "good.spec", Serialize(grim));
  WriteFileAtomically(dir / "bad.spec", "ipd-strategy 1\nname X\ntrained nope\n");
  CHECK(Ipd({"validate-spec", (dir / "good.spec").string()}).code == 0);
  const Invocation bad =
      Ipd({"validate-spec", (dir / "good.spec").string(), (dir / "bad.spec").string()});
  CHECK(bad.code == cli::kExitConfig);
  CHECK(bad.err.find("line 3") != std::string::npos);
}

}  // namespace
}  // namespace ipd
