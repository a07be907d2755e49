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

#ifndef IPD_STRATEGY_H_
#define IPD_STRATEGY_H_

#include "ipd/action.h"
#include "ipd/random.h"

namespace ipd {

// A live player inside one match. Instances are created fresh for every match
// and see nothing but their own History: no match length, no opponent
// identity, no other matches.
class Strategy {
 public:
  virtual ~Strategy() = default;

  // Chooses the next intended action. Deterministic strategies never touch
  // `rng`. Called exactly once per turn, in turn order.
  virtual Action Decide(const History& history, RandomStream& rng) = 0;
};

}  // namespace ipd

#endif  // IPD_STRATEGY_H_
