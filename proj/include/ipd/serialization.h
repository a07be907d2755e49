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

// Line-oriented text format for strategy specs. One block per spec:
//
//   ipd-strategy 1
//   name Evolved LookerUp 0 1 1
//   trained true
//   archetype lookerup
//   n1 0
//   m1 1
//   m2 1
//   row - C C C
//   row - C D D
//   ...
//   end
//
// Each line is a field name followed by space separated values. Table rows
// appear in lexicographic key order. Real numbers are written in the
// shortest form that parses back to the same double. README.md
// lists the fields of every archetype.

#ifndef IPD_SERIALIZATION_H_
#define IPD_SERIALIZATION_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ipd/strategy_spec.h"

namespace ipd {

inline constexpr int kSpecFormatVersion = 1;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& message);
  // 1-based line of the offending input (one past the end when truncated).
  std::size_t line() const { return line_; }
  // The field being read when parsing failed.
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

std::string Serialize(const StrategySpec& spec);
// Exactly one spec. Throws ParseError.
StrategySpec Deserialize(std::string_view text);
// Any number of concatenated blocks.
std::vector<StrategySpec> DeserializeAll(std::string_view text);

// Canonical text used for fingerprints; same as Serialize.
inline std::string Fingerprintable(const StrategySpec& spec) {
  return Serialize(spec);
}

// Shortest round-trip decimal form of a double.
std::string FormatReal(double value);

}  // namespace ipd

#endif  // IPD_SERIALIZATION_H_
