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

#ifndef IPD_ACTION_H_
#define IPD_ACTION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ipd {

// The byte value doubles as a defect indicator (C = 0, D = 1); the SIMD
// kernels rely on this encoding.
enum class Action : std::uint8_t { kCooperate = 0, kDefect = 1 };

inline constexpr Action kC = Action::kCooperate;
inline constexpr Action kD = Action::kDefect;

constexpr Action Flip(Action a) { return a == kC ? kD : kC; }
constexpr char ToChar(Action a) { return a == kC ? 'C' : 'D'; }
std::optional<Action> ActionFromChar(char c);
std::string ToString(std::span<const Action> actions);

struct JointAction {
  Action a;
  Action b;
  friend bool operator==(const JointAction&, const JointAction&) = default;
};

// Per-round utilities. Payoffs are integers so match totals aggregate exactly.
struct PayoffMatrix {
  int reward = 3;
  int sucker = 0;
  int temptation = 5;
  int punishment = 1;

  // T > R > P > S and 2R > T + S.
  bool IsPrisonersDilemma() const;
  friend bool operator==(const PayoffMatrix&, const PayoffMatrix&) = default;
};

// Returns (row player's payoff, column player's payoff).
constexpr std::pair<int, int> ScoreRound(JointAction pair,
                                         const PayoffMatrix& payoffs) {
  if (pair.a == kC) {
    return pair.b == kC ? std::pair{payoffs.reward, payoffs.reward}
                        : std::pair{payoffs.sucker, payoffs.temptation};
  }
  return pair.b == kC ? std::pair{payoffs.temptation, payoffs.sucker}
                      : std::pair{payoffs.punishment, payoffs.punishment};
}

// What one player has observed so far: its own executed moves and the
// opponent's executed moves, always of equal length.
class History {
 public:
  History() = default;

  void Reserve(std::size_t turns) {
    own_.reserve(turns);
    opponent_.reserve(turns);
  }
  void Record(Action own, Action opponent) {
    own_.push_back(own);
    opponent_.push_back(opponent);
    own_defections_ += own == kD;
    opponent_defections_ += opponent == kD;
  }

  std::size_t size() const { return own_.size(); }
  bool empty() const { return own_.empty(); }

  std::span<const Action> own() const { return own_; }
  std::span<const Action> opponent() const { return opponent_; }

  // back = 1 is the most recent round. Caller guarantees back <= size().
  Action own_back(std::size_t back) const { return own_[own_.size() - back]; }
  Action opponent_back(std::size_t back) const {
    return opponent_[opponent_.size() - back];
  }

  int own_defections() const { return own_defections_; }
  int opponent_defections() const { return opponent_defections_; }
  int own_cooperations() const {
    return static_cast<int>(size()) - own_defections_;
  }
  int opponent_cooperations() const {
    return static_cast<int>(size()) - opponent_defections_;
  }

 private:
  std::vector<Action> own_;
  std::vector<Action> opponent_;
  int own_defections_ = 0;
  int opponent_defections_ = 0;
};

}  // namespace ipd

#endif  // IPD_ACTION_H_
