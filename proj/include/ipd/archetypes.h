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

// The trainable strategy representations: lookup tables (deterministic and
// stochastic), single-hidden-layer networks, finite state machines, hidden
// Markov models and memory-one probability vectors.
//
// Specs are plain values. The *Decide functions are the pure decision rules;
// MakeStrategy wraps a spec into a per-match Strategy instance that carries
// whatever mutable state the rule needs (current FSM/HMM state).

#ifndef IPD_ARCHETYPES_H_
#define IPD_ARCHETYPES_H_

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ipd/action.h"
#include "ipd/kernels.h"
#include "ipd/random.h"
#include "ipd/strategy.h"

namespace ipd {

// Which parts of the history a lookup table is keyed on: the opponent's first
// `n1` moves, the opponent's last `m1` moves and the player's own last `m2`
// moves.
struct LookupShape {
  int n1 = 0;
  int m1 = 0;
  int m2 = 0;

  int key_length() const { return n1 + m1 + m2; }
  std::size_t table_size() const { return std::size_t{1} << key_length(); }
  // Rounds needed before a full key exists.
  int warmup() const;
  friend bool operator==(const LookupShape&, const LookupShape&) = default;
};

// Tables are indexed by the key read as a binary number, most significant
// bit first: opponent's first n1 moves (oldest first), opponent's last m1
// moves (oldest first), own last m2 moves (oldest first), with C = 0 and
// D = 1. Index order is therefore lexicographic key order with C < D.
struct LookerUpSpec {
  LookupShape shape;
  std::vector<Action> table;
  friend bool operator==(const LookerUpSpec&, const LookerUpSpec&) = default;
};

struct GamblerSpec {
  LookupShape shape;
  // Probability of cooperating, same indexing as LookerUpSpec::table.
  std::vector<double> table;
  friend bool operator==(const GamblerSpec&, const GamblerSpec&) = default;
};

// Input order of the 17 history features; see AnnFeatures.
enum AnnFeature : std::size_t {
  kOpponentFirstC = 0,
  kOpponentFirstD,
  kOpponentSecondC,
  kOpponentSecondD,
  kOwnPreviousC,
  kOwnPreviousD,
  kOwnSecondPreviousC,
  kOwnSecondPreviousD,
  kOpponentPreviousC,
  kOpponentPreviousD,
  kOpponentSecondPreviousC,
  kOpponentSecondPreviousD,
  kOpponentTotalC,
  kOpponentTotalD,
  kOwnTotalC,
  kOwnTotalD,
  kRoundNumber,
};

struct AnnSpec {
  int hidden_width = 0;
  // hidden_width x 17, row-major.
  std::vector<double> input_weights;
  std::vector<double> input_bias;
  std::vector<double> output_weights;
  friend bool operator==(const AnnSpec&, const AnnSpec&) = default;
};

struct FsmTransition {
  int next_state = 0;
  Action action = kC;
  friend bool operator==(const FsmTransition&, const FsmTransition&) = default;
};

struct FsmSpec {
  int num_states = 0;
  int initial_state = 0;
  Action initial_action = kC;
  // Indexed by state * 2 + (opponent's last move == D).
  std::vector<FsmTransition> transitions;

  const FsmTransition& at(int state, Action opponent_last) const {
    return transitions[static_cast<std::size_t>(state) * 2 +
                       (opponent_last == kD)];
  }
  friend bool operator==(const FsmSpec&, const FsmSpec&) = default;
};

struct HmmSpec {
  int num_states = 0;
  int initial_state = 0;
  Action initial_action = kC;
  // num_states x num_states, row-major; the row is chosen by the current
  // state, the matrix by the opponent's last move.
  std::vector<double> transition_c;
  std::vector<double> transition_d;
  // Probability of cooperating in each state.
  std::vector<double> emission;
  friend bool operator==(const HmmSpec&, const HmmSpec&) = default;
};

// Cooperation probabilities after (own, opponent) = CC, CD, DC, DD.
struct MemoryOneSpec {
  Action initial_action = kC;
  std::array<double, 4> probabilities{};
  friend bool operator==(const MemoryOneSpec&, const MemoryOneSpec&) = default;
};

// Decision rules. Callers guarantee the spec is valid.

// Index of the key the history selects, or -1 during warm-up.
std::ptrdiff_t LookupIndex(const LookupShape& shape, const History& history);
// C during warm-up (fewer than max(n1, m1, m2) rounds), otherwise the table
// entry for the current key.
Action LookerUpDecide(const LookerUpSpec& spec, const History& history);
Action GamblerDecide(const GamblerSpec& spec, const History& history,
                     RandomStream& rng);
std::array<double, kernels::kAnnInputs> AnnFeatures(const History& history);
double AnnOutput(const AnnSpec& spec, const History& history);
// Positive network output plays C; zero or negative plays D.
Action AnnDecide(const AnnSpec& spec, const History& history);
// Returns (action, state after this turn). On turn 1 the initial action and
// initial state.
std::pair<Action, int> FsmDecide(const FsmSpec& spec, int state,
                                 const History& history);
std::pair<Action, int> HmmDecide(const HmmSpec& spec, int state,
                                 const History& history, RandomStream& rng);
Action MemoryOneDecide(const MemoryOneSpec& spec, const History& history,
                       RandomStream& rng);

// Number of states reachable from the initial state.
int ReachableStates(const FsmSpec& spec);
// The FSM an HMM with one-hot transition rows and 0/1 emissions implements.
// Precondition: IsDeterministic(spec).
FsmSpec InducedFsm(const HmmSpec& spec);
bool IsDeterministic(const HmmSpec& spec);
// Gambler over (0, 1, 1) with the memory-one probabilities. Warm-up plays C,
// so this matches the memory-one rule whenever its initial action is C.
GamblerSpec GamblerFromMemoryOne(const MemoryOneSpec& spec);

// Every invariant breach, not just the first. Empty means valid.
std::vector<std::string> Validate(const LookerUpSpec& spec);
std::vector<std::string> Validate(const GamblerSpec& spec);
std::vector<std::string> Validate(const AnnSpec& spec);
std::vector<std::string> Validate(const FsmSpec& spec);
std::vector<std::string> Validate(const HmmSpec& spec);
std::vector<std::string> Validate(const MemoryOneSpec& spec);

std::unique_ptr<Strategy> MakeStrategy(const LookerUpSpec& spec);
std::unique_ptr<Strategy> MakeStrategy(const GamblerSpec& spec);
std::unique_ptr<Strategy> MakeStrategy(const AnnSpec& spec);
std::unique_ptr<Strategy> MakeStrategy(const FsmSpec& spec);
std::unique_ptr<Strategy> MakeStrategy(const HmmSpec& spec);
std::unique_ptr<Strategy> MakeStrategy(const MemoryOneSpec& spec);

}  // namespace ipd

#endif  // IPD_ARCHETYPES_H_
