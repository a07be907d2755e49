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

#include "ipd/action.h"

namespace ipd {

std::optional<Action> ActionFromChar(char c) {
  switch (c) {
    case 'C':
    case 'c':
      return kC;
    case 'D':
    case 'd':
      return kD;
    default:
      return std::nullopt;
  }
}

std::string ToString(std::span<const Action> actions) {
  std::string s;
  s.reserve(actions.size());
  for (Action a : actions) s.push_back(ToChar(a));
  return s;
}

bool PayoffMatrix::IsPrisonersDilemma() const {
  return temptation > reward && reward > punishment && punishment > sucker &&
         2 * reward > temptation + sucker;
}

}  // namespace ipd
