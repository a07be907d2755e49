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

#include "ipd/archetypes.h"

#include <algorithm>
#include <cmath>
#include <deque>

#include <fmt/format.h>

namespace ipd {

int LookupShape::warmup() const { return std::max({n1, m1, m2}); }

std::ptrdiff_t LookupIndex(const LookupShape& shape, const History& history) {
  const auto rounds = static_cast<std::ptrdiff_t>(history.size());
  if (rounds < shape.warmup()) return -1;
  const auto own = history.own();
  const auto opp = history.opponent();
  std::ptrdiff_t index = 0;
  for (int i = 0; i < shape.n1; ++i) index = (index << 1) | (opp[i] == kD);
  for (int i = shape.m1; i > 0; --i) {
    index = (index << 1) | (opp[rounds - i] == kD);
  }
  for (int i = shape.m2; i > 0; --i) {
    index = (index << 1) | (own[rounds - i] == kD);
  }
  return index;
}

Action LookerUpDecide(const LookerUpSpec& spec, const History& history) {
  const std::ptrdiff_t index = LookupIndex(spec.shape, history);
  return index < 0 ? kC : spec.table[index];
}

Action GamblerDecide(const GamblerSpec& spec, const History& history,
                     RandomStream& rng) {
  const std::ptrdiff_t index = LookupIndex(spec.shape, history);
  if (index < 0) return kC;
  return rng.Bernoulli(spec.table[index]) ? kC : kD;
}

std::array<double, kernels::kAnnInputs> AnnFeatures(const History& history) {
  std::array<double, kernels::kAnnInputs> f{};
  const std::size_t n = history.size();
  const auto one_hot = [&f](std::size_t c_slot, Action a) {
    f[c_slot + (a == kD)] = 1.0;
  };
  if (n >= 1) {
    one_hot(kOpponentFirstC, history.opponent()[0]);
    one_hot(kOwnPreviousC, history.own_back(1));
    one_hot(kOpponentPreviousC, history.opponent_back(1));
  }
  if (n >= 2) {
    one_hot(kOpponentSecondC, history.opponent()[1]);
    one_hot(kOwnSecondPreviousC, history.own_back(2));
    one_hot(kOpponentSecondPreviousC, history.opponent_back(2));
  }
  f[kOpponentTotalC] = history.opponent_cooperations();
  f[kOpponentTotalD] = history.opponent_defections();
  f[kOwnTotalC] = history.own_cooperations();
  f[kOwnTotalD] = history.own_defections();
  f[kRoundNumber] = static_cast<double>(n + 1);
  return f;
}

double AnnOutput(const AnnSpec& spec, const History& history) {
  const auto features = AnnFeatures(history);
  return kernels::DenseReluOutput(spec.input_weights, spec.input_bias,
                                  spec.output_weights, features);
}

Action AnnDecide(const AnnSpec& spec, const History& history) {
  return AnnOutput(spec, history) > 0.0 ? kC : kD;
}

std::pair<Action, int> FsmDecide(const FsmSpec& spec, int state,
                                 const History& history) {
  if (history.empty()) return {spec.initial_action, spec.initial_state};
  const FsmTransition& t = spec.at(state, history.opponent_back(1));
  return {t.action, t.next_state};
}

namespace {

int SampleRow(std::span<const double> row, RandomStream& rng) {
  const double u = rng.Uniform();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    cumulative += row[i];
    if (u < cumulative) return static_cast<int>(i);
  }
  // Rounding left u above the final cumulative sum: take the last state with
  // non-zero mass.
  for (std::size_t i = row.size(); i-- > 0;) {
    if (row[i] > 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(row.size()) - 1;
}

}  // namespace

std::pair<Action, int> HmmDecide(const HmmSpec& spec, int state,
                                 const History& history, RandomStream& rng) {
  if (history.empty()) return {spec.initial_action, spec.initial_state};
  const auto& matrix =
      history.opponent_back(1) == kC ? spec.transition_c : spec.transition_d;
  const auto n = static_cast<std::size_t>(spec.num_states);
  const int next = SampleRow(
      std::span<const double>(matrix).subspan(static_cast<std::size_t>(state) * n, n),
      rng);
  const Action action = rng.Bernoulli(spec.emission[next]) ? kC : kD;
  return {action, next};
}

Action MemoryOneDecide(const MemoryOneSpec& spec, const History& history,
                       RandomStream& rng) {
  if (history.empty()) return spec.initial_action;
  const std::size_t index = 2 * (history.own_back(1) == kD) +
                            (history.opponent_back(1) == kD);
  return rng.Bernoulli(spec.probabilities[index]) ? kC : kD;
}

int ReachableStates(const FsmSpec& spec) {
  std::vector<bool> seen(spec.num_states, false);
  std::deque<int> frontier{spec.initial_state};
  seen[spec.initial_state] = true;
  int count = 1;
  while (!frontier.empty()) {
    const int s = frontier.front();
    frontier.pop_front();
    for (Action opp : {kC, kD}) {
      const int next = spec.at(s, opp).next_state;
      if (!seen[next]) {
        seen[next] = true;
        ++count;
        frontier.push_back(next);
      }
    }
  }
  return count;
}

namespace {

int OneHotIndex(std::span<const double> row) {
  int hot = -1;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] == 1.0) {
      if (hot >= 0) return -1;
      hot = static_cast<int>(i);
    } else if (row[i] != 0.0) {
      return -1;
    }
  }
  return hot;
}

}  // namespace

bool IsDeterministic(const HmmSpec& spec) {
  const auto n = static_cast<std::size_t>(spec.num_states);
  for (std::size_t s = 0; s < n; ++s) {
    for (const auto* m : {&spec.transition_c, &spec.transition_d}) {
      if (OneHotIndex(std::span<const double>(*m).subspan(s * n, n)) < 0) {
        return false;
      }
    }
    if (spec.emission[s] != 0.0 && spec.emission[s] != 1.0) return false;
  }
  return true;
}

FsmSpec InducedFsm(const HmmSpec& spec) {
  const auto n = static_cast<std::size_t>(spec.num_states);
  FsmSpec fsm;
  fsm.num_states = spec.num_states;
  fsm.initial_state = spec.initial_state;
  fsm.initial_action = spec.initial_action;
  fsm.transitions.resize(2 * n);
  for (std::size_t s = 0; s < n; ++s) {
    for (Action opp : {kC, kD}) {
      const auto& m = opp == kC ? spec.transition_c : spec.transition_d;
      const int next = OneHotIndex(std::span<const double>(m).subspan(s * n, n));
      fsm.transitions[2 * s + (opp == kD)] = {
          next, spec.emission[next] == 1.0 ? kC : kD};
    }
  }
  return fsm;
}

GamblerSpec GamblerFromMemoryOne(const MemoryOneSpec& spec) {
  // Key is (opponent last, own last); memory-one order is (own, opponent).
  GamblerSpec g;
  g.shape = {0, 1, 1};
  g.table.resize(4);
  for (std::size_t own = 0; own < 2; ++own) {
    for (std::size_t opp = 0; opp < 2; ++opp) {
      g.table[2 * opp + own] = spec.probabilities[2 * own + opp];
    }
  }
  return g;
}

// Validation.

namespace {

bool IsProbability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

void CheckShape(const LookupShape& shape, std::size_t table_size,
                std::vector<std::string>& out) {
  if (shape.n1 < 0 || shape.m1 < 0 || shape.m2 < 0) {
    out.push_back("negative key length");
    return;
  }
  if (shape.key_length() > 24) {
    out.push_back(fmt::format("key length {} too large", shape.key_length()));
    return;
  }
  if (table_size != shape.table_size()) {
    out.push_back(fmt::format("table has {} entries, expected {}", table_size,
                              shape.table_size()));
  }
}

void CheckStochasticRows(const std::vector<double>& m, int n,
                         std::string_view label,
                         std::vector<std::string>& out) {
  const auto size = static_cast<std::size_t>(n);
  if (m.size() != size * size) {
    out.push_back(fmt::format("{} has {} entries, expected {}", label, m.size(),
                              size * size));
    return;
  }
  for (std::size_t r = 0; r < size; ++r) {
    double sum = 0.0;
    bool entries_ok = true;
    for (std::size_t c = 0; c < size; ++c) {
      const double p = m[r * size + c];
      if (!IsProbability(p)) entries_ok = false;
      sum += p;
    }
    if (!entries_ok) {
      out.push_back(fmt::format("{} row {}: entry outside [0,1]", label, r));
    }
    if (!(std::abs(sum - 1.0) <= 1e-9)) {
      out.push_back(
          fmt::format("{} row {}: row not stochastic (sums to {})", label, r, sum));
    }
  }
}

}  // namespace

std::vector<std::string> Validate(const LookerUpSpec& spec) {
  std::vector<std::string> out;
  CheckShape(spec.shape, spec.table.size(), out);
  for (std::size_t i = 0; i < spec.table.size(); ++i) {
    if (spec.table[i] != kC && spec.table[i] != kD) {
      out.push_back(fmt::format("table entry {} is not an action", i));
    }
  }
  return out;
}

std::vector<std::string> Validate(const GamblerSpec& spec) {
  std::vector<std::string> out;
  CheckShape(spec.shape, spec.table.size(), out);
  for (std::size_t i = 0; i < spec.table.size(); ++i) {
    if (!IsProbability(spec.table[i])) {
      out.push_back(fmt::format("table entry {} outside [0,1]", i));
    }
  }
  return out;
}

std::vector<std::string> Validate(const AnnSpec& spec) {
  std::vector<std::string> out;
  if (spec.hidden_width <= 0) {
    out.push_back("hidden width must be positive");
    return out;
  }
  const auto h = static_cast<std::size_t>(spec.hidden_width);
  if (spec.input_weights.size() != h * kernels::kAnnInputs) {
    out.push_back(fmt::format("input weights have {} entries, expected {}",
                              spec.input_weights.size(), h * kernels::kAnnInputs));
  }
  if (spec.input_bias.size() != h) {
    out.push_back(fmt::format("input bias has {} entries, expected {}",
                              spec.input_bias.size(), h));
  }
  if (spec.output_weights.size() != h) {
    out.push_back(fmt::format("output weights have {} entries, expected {}",
                              spec.output_weights.size(), h));
  }
  for (const auto* v :
       {&spec.input_weights, &spec.input_bias, &spec.output_weights}) {
    if (!std::all_of(v->begin(), v->end(),
                     [](double w) { return std::isfinite(w); })) {
      out.push_back("non-finite weight");
      break;
    }
  }
  return out;
}

std::vector<std::string> Validate(const FsmSpec& spec) {
  std::vector<std::string> out;
  if (spec.num_states <= 0) {
    out.push_back("number of states must be positive");
    return out;
  }
  if (spec.initial_state < 0 || spec.initial_state >= spec.num_states) {
    out.push_back(fmt::format("initial state {} out of range", spec.initial_state));
  }
  const auto expected = static_cast<std::size_t>(spec.num_states) * 2;
  if (spec.transitions.size() != expected) {
    out.push_back(fmt::format("{} transitions, expected {}",
                              spec.transitions.size(), expected));
  }
  for (std::size_t i = 0; i < spec.transitions.size(); ++i) {
    const int next = spec.transitions[i].next_state;
    if (next < 0 || next >= spec.num_states) {
      out.push_back(fmt::format("transition ({}, {}): state out of range ({})",
                                i / 2, i % 2 == 0 ? 'C' : 'D', next));
    }
  }
  return out;
}

std::vector<std::string> Validate(const HmmSpec& spec) {
  std::vector<std::string> out;
  if (spec.num_states <= 0) {
    out.push_back("number of states must be positive");
    return out;
  }
  if (spec.initial_state < 0 || spec.initial_state >= spec.num_states) {
    out.push_back(fmt::format("initial state {} out of range", spec.initial_state));
  }
  CheckStochasticRows(spec.transition_c, spec.num_states, "transition_c", out);
  CheckStochasticRows(spec.transition_d, spec.num_states, "transition_d", out);
  if (spec.emission.size() != static_cast<std::size_t>(spec.num_states)) {
    out.push_back(fmt::format("emission has {} entries, expected {}",
                              spec.emission.size(), spec.num_states));
  }
  for (std::size_t i = 0; i < spec.emission.size(); ++i) {
    if (!IsProbability(spec.emission[i])) {
      out.push_back(fmt::format("emission {} outside [0,1]", i));
    }
  }
  return out;
}

std::vector<std::string> Validate(const MemoryOneSpec& spec) {
  std::vector<std::string> out;
  static constexpr const char* kNames[] = {"p_cc", "p_cd", "p_dc", "p_dd"};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!IsProbability(spec.probabilities[i])) {
      out.push_back(fmt::format("{} outside [0,1]", kNames[i]));
    }
  }
  return out;
}

// Per-match instances.

namespace {

class LookerUpStrategy final : public Strategy {
 public:
  explicit LookerUpStrategy(LookerUpSpec spec) : spec_(std::move(spec)) {}
  Action Decide(const History& history, RandomStream&) override {
    return LookerUpDecide(spec_, history);
  }

 private:
  LookerUpSpec spec_;
};

class GamblerStrategy final : public Strategy {
 public:
  explicit GamblerStrategy(GamblerSpec spec) : spec_(std::move(spec)) {}
  Action Decide(const History& history, RandomStream& rng) override {
    return GamblerDecide(spec_, history, rng);
  }

 private:
  GamblerSpec spec_;
};

class AnnStrategy final : public Strategy {
 public:
  explicit AnnStrategy(AnnSpec spec) : spec_(std::move(spec)) {}
  Action Decide(const History& history, RandomStream&) override {
    return AnnDecide(spec_, history);
  }

 private:
  AnnSpec spec_;
};

class FsmStrategy final : public Strategy {
 public:
  explicit FsmStrategy(FsmSpec spec)
      : spec_(std::move(spec)), state_(spec_.initial_state) {}
  Action Decide(const History& history, RandomStream&) override {
    const auto [action, next] = FsmDecide(spec_, state_, history);
    state_ = next;
    return action;
  }

 private:
  FsmSpec spec_;
  int state_;
};

class HmmStrategy final : public Strategy {
 public:
  explicit HmmStrategy(HmmSpec spec)
      : spec_(std::move(spec)), state_(spec_.initial_state) {}
  Action Decide(const History& history, RandomStream& rng) override {
    const auto [action, next] = HmmDecide(spec_, state_, history, rng);
    state_ = next;
    return action;
  }

 private:
  HmmSpec spec_;
  int state_;
};

class MemoryOneStrategy final : public Strategy {
 public:
  explicit MemoryOneStrategy(MemoryOneSpec spec) : spec_(spec) {}
  Action Decide(const History& history, RandomStream& rng) override {
    return MemoryOneDecide(spec_, history, rng);
  }

 private:
  MemoryOneSpec spec_;
};

}  // namespace

std::unique_ptr<Strategy> MakeStrategy(const LookerUpSpec& spec) {
  return std::make_unique<LookerUpStrategy>(spec);
}
std::unique_ptr<Strategy> MakeStrategy(const GamblerSpec& spec) {
  return std::make_unique<GamblerStrategy>(spec);
}
std::unique_ptr<Strategy> MakeStrategy(const AnnSpec& spec) {
  return std::make_unique<AnnStrategy>(spec);
}
std::unique_ptr<Strategy> MakeStrategy(const FsmSpec& spec) {
  return std::make_unique<FsmStrategy>(spec);
}
std::unique_ptr<Strategy> MakeStrategy(const HmmSpec& spec) {
  return std::make_unique<HmmStrategy>(spec);
}
std::unique_ptr<Strategy> MakeStrategy(const MemoryOneSpec& spec) {
  return std::make_unique<MemoryOneStrategy>(spec);
}

}  // namespace ipd
