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

#include "ipd/corpus.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <numeric>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "ipd/classics.h"
#include "ipd/engine.h"
#include "ipd/serialization.h"

namespace ipd {
namespace {

StrategySpec Classic(std::string_view key, double parameter = 0.0) {
  const ClassicInfo* info = FindClassic(key);
  if (info == nullptr) throw std::logic_error("unknown classic key");
  return {std::string(info->display_name), false,
          ClassicSpec{std::string(key), parameter}};
}

StrategySpec MemoryOne(std::string name, std::array<double, 4> p,
                       bool trained = false) {
  return {std::move(name), trained, MemoryOneSpec{kC, p}};
}

std::vector<StrategySpec> BuiltInSpecs() {
  std::vector<StrategySpec> specs;
  for (const ClassicInfo& info : ClassicCatalog()) {
    if (info.key == "random") continue;
    specs.push_back(Classic(info.key));
  }
  StrategySpec random = Classic("random", 0.5);
  random.name = "Random: 0.5";
  specs.push_back(std::move(random));

  // Generous TFT at the standard generosity min(1 - (T-R)/(R-S), (R-P)/(T-P))
  // = 1/3 for (3, 1, 5, 0).
  specs.push_back(MemoryOne("GTFT: 0.33", {1.0, 1.0 / 3.0, 1.0, 1.0 / 3.0}));
  specs.push_back(MemoryOne("ZD-Extort-2", {8.0 / 9.0, 0.5, 1.0 / 3.0, 0.0}));
  specs.push_back(MemoryOne("ZD-GTFT-2", {1.0, 0.125, 1.0, 0.25}));
  specs.push_back(MemoryOne("Stochastic WSLS: 0.05", {0.95, 0.05, 0.05, 0.95}));
  specs.push_back(
      MemoryOne("PSO Gambler Mem1", {1.0, 0.5217, 0.0, 0.121}, /*trained=*/true));

  std::vector<StrategySpec> team;
  for (const StrategySpec& s : specs) {
    if (!Describe(s).stochastic) team.push_back(s);
  }
  specs.push_back(MetaMajority(team));
  specs.push_back(MetaWinner(team));
  return specs;
}

std::size_t EditDistance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t above = row[j];
      const bool same = std::tolower(static_cast<unsigned char>(a[i - 1])) ==
                        std::tolower(static_cast<unsigned char>(b[j - 1]));
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diagonal + (same ? 0 : 1)});
      diagonal = above;
    }
  }
  return row[b.size()];
}

std::string DepthString(const std::optional<int>& depth) {
  return depth ? std::to_string(*depth) : "inf";
}

}  // namespace

bool IsNice(const StrategySpec& spec, int turns) {
  static const StrategySpec cooperator = Classic("cooperator");
  const int seeds = Describe(spec).stochastic ? 32 : 1;
  for (int s = 0; s < seeds; ++s) {
    MatchConfig config;
    config.turns = turns;
    config.seed = DeriveSeed(0x6e696365, {static_cast<std::uint64_t>(s)});
    const MatchOutcome outcome = PlayMatch(spec, cooperator, config);
    if (std::find(outcome.moves_a.begin(), outcome.moves_a.end(), kD) !=
        outcome.moves_a.end()) {
      return false;
    }
  }
  return true;
}

Registry::Registry(std::vector<StrategySpec> specs) : specs_(std::move(specs)) {
  std::set<std::string> names;
  for (const StrategySpec& spec : specs_) {
    if (!names.insert(spec.name).second) {
      throw std::invalid_argument(
          fmt::format("duplicate strategy name '{}'", spec.name));
    }
    StrategyDescriptor d = ipd::Describe(spec);
    d.nice = IsNice(spec);
    descriptors_.push_back(std::move(d));
  }
}

const Registry& Registry::Default() {
  static const Registry registry(BuiltInSpecs());
  return registry;
}

const StrategySpec* Registry::Find(std::string_view name) const {
  const auto it = std::find_if(specs_.begin(), specs_.end(),
                               [name](const StrategySpec& s) { return s.name == name; });
  return it == specs_.end() ? nullptr : &*it;
}

const StrategyDescriptor* Registry::Describe(std::string_view name) const {
  const auto it =
      std::find_if(descriptors_.begin(), descriptors_.end(),
                   [name](const StrategyDescriptor& d) { return d.name == name; });
  return it == descriptors_.end() ? nullptr : &*it;
}

std::vector<StrategySpec> Registry::DefaultRoster() const {
  std::vector<StrategySpec> roster;
  for (const StrategySpec& spec : specs_) {
    if (!std::holds_alternative<MetaSpec>(spec.body)) roster.push_back(spec);
  }
  return roster;
}

std::vector<std::string> NearestNames(std::string_view name,
                                      const std::vector<std::string>& candidates,
                                      std::size_t count) {
  std::vector<std::pair<std::size_t, std::size_t>> scored;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    scored.emplace_back(EditDistance(name, candidates[i]), i);
  }
  std::stable_sort(scored.begin(), scored.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < std::min(count, scored.size()); ++i) {
    out.push_back(candidates[scored[i].second]);
  }
  return out;
}

std::vector<std::string> Registry::NearestNames(std::string_view name,
                                                std::size_t count) const {
  std::vector<std::string> names;
  for (const StrategySpec& spec : specs_) names.push_back(spec.name);
  return ipd::NearestNames(name, names, count);
}

std::string Registry::ToCsv() const {
  std::string out = "name,stochastic,memory_depth,trained\n";
  for (const StrategyDescriptor& d : descriptors_) {
    out += fmt::format("{},{},{},{}\n", d.name, d.stochastic ? "true" : "false",
                       DepthString(d.memory_depth), d.trained ? "true" : "false");
  }
  return out;
}

std::string Registry::Hash() const {
  std::string text = ToCsv();
  for (const StrategySpec& spec : specs_) text += Fingerprintable(spec);
  return fmt::format("{:016x}", Fingerprint(text));
}

std::vector<StrategyDescriptor> CorpusRegistry() {
  return Registry::Default().descriptors();
}

std::uint64_t Fingerprint(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace ipd
