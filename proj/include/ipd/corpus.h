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

#ifndef IPD_CORPUS_H_
#define IPD_CORPUS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ipd/strategy_spec.h"

namespace ipd {

// Simulates `spec` against Cooperator without noise (several seeds when
// stochastic) and reports whether it ever defected.
bool IsNice(const StrategySpec& spec, int turns = 200);

// The named corpus of strategies. Immutable after construction.
class Registry {
 public:
  // The built-in corpus: classic strategies, memory-one strategies, one
  // trained memory-one Gambler, and two Meta strategies.
  static const Registry& Default();

  explicit Registry(std::vector<StrategySpec> specs);

  const std::vector<StrategySpec>& specs() const { return specs_; }
  const std::vector<StrategyDescriptor>& descriptors() const {
    return descriptors_;
  }

  // nullptr when no strategy has that name.
  const StrategySpec* Find(std::string_view name) const;
  const StrategyDescriptor* Describe(std::string_view name) const;

  // Every non-Meta strategy, in registry order.
  std::vector<StrategySpec> DefaultRoster() const;

  // Up to `count` names closest to `name` by edit distance.
  std::vector<std::string> NearestNames(std::string_view name,
                                        std::size_t count = 3) const;

  // Stable 64-bit fingerprint of the registry listing, hex encoded.
  std::string Hash() const;

  // name,stochastic,memory_depth,trained with a header row.
  std::string ToCsv() const;

 private:
  std::vector<StrategySpec> specs_;
  std::vector<StrategyDescriptor> descriptors_;
};

// Registry descriptors of the default corpus.
std::vector<StrategyDescriptor> CorpusRegistry();

// Up to `count` of `candidates` closest to `name` by case-insensitive edit
// distance, closest first.
std::vector<std::string> NearestNames(std::string_view name,
                                      const std::vector<std::string>& candidates,
                                      std::size_t count = 3);

// FNV-1a, used for corpus and roster fingerprints.
std::uint64_t Fingerprint(std::string_view text);

}  // namespace ipd

#endif  // IPD_CORPUS_H_
