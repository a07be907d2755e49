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

#include "ipd/classics.h"

#include <algorithm>
#include <array>
#include <functional>

namespace ipd {
namespace {

using Rule = Action (*)(const History&);

// Stateless strategies: the move is a function of the history alone.
class RuleStrategy final : public Strategy {
 public:
  explicit RuleStrategy(Rule rule) : rule_(rule) {}
  Action Decide(const History& history, RandomStream&) override {
    return rule_(history);
  }

 private:
  Rule rule_;
};

Action Cooperator(const History&) { return kC; }
Action Defector(const History&) { return kD; }

Action TitForTat(const History& h) {
  return h.empty() ? kC : h.opponent_back(1);
}

Action TitForTwoTats(const History& h) {
  return h.size() >= 2 && h.opponent_back(1) == kD && h.opponent_back(2) == kD
             ? kD
             : kC;
}

Action TwoTitsForTat(const History& h) {
  for (std::size_t back = 1; back <= std::min<std::size_t>(2, h.size());
       ++back) {
    if (h.opponent_back(back) == kD) return kD;
  }
  return kC;
}

Action Grudger(const History& h) {
  return h.opponent_defections() > 0 ? kD : kC;
}

// Stay after R or T, shift after S or P.
Action WinStayLoseShift(const History& h) {
  if (h.empty()) return kC;
  return h.opponent_back(1) == kC ? h.own_back(1) : Flip(h.own_back(1));
}

// Opens C, D. Cooperates forever if the opponent opened the same way,
// otherwise defects forever.
Action Handshake(const History& h) {
  if (h.size() == 0) return kC;
  if (h.size() == 1) return kD;
  return h.opponent()[0] == kC && h.opponent()[1] == kD ? kC : kD;
}

Action CollectiveStrategy(const History& h) {
  if (h.size() == 0) return kC;
  if (h.size() == 1) return kD;
  if (h.opponent_defections() > 1) return kD;
  return h.opponent()[0] == kC && h.opponent()[1] == kD ? kC : kD;
}

Action Aggravater(const History& h) {
  if (h.size() < 3) return kD;
  return h.opponent_defections() > 0 ? kD : kC;
}

Action Alternator(const History& h) { return h.size() % 2 == 0 ? kC : kD; }
Action CyclerCCD(const History& h) { return h.size() % 3 == 2 ? kD : kC; }
Action CyclerDDC(const History& h) { return h.size() % 3 == 2 ? kC : kD; }

// Opens D, C, C. Exploits forever if the opponent did not retaliate on
// turns 2 and 3, otherwise plays Tit For Tat.
Action Prober(const History& h) {
  if (h.size() == 0) return kD;
  if (h.size() < 3) return kC;
  if (h.opponent()[1] == kC && h.opponent()[2] == kC) return kD;
  return h.opponent_back(1);
}

// Defection rate strictly above 10%.
bool DefectsOften(const History& h) {
  return h.opponent_defections() * 10 > static_cast<int>(h.size());
}

Action ForgivingTitForTat(const History& h) {
  if (h.empty()) return kC;
  return h.opponent_back(1) == kD && DefectsOften(h) ? kD : kC;
}

Action Forgiver(const History& h) { return DefectsOften(h) ? kD : kC; }

Action SuspiciousTitForTat(const History& h) {
  return h.empty() ? kD : h.opponent_back(1);
}

Action HardTitForTat(const History& h) {
  for (std::size_t back = 1; back <= std::min<std::size_t>(3, h.size());
       ++back) {
    if (h.opponent_back(back) == kD) return kD;
  }
  return kC;
}

Action HardTitForTwoTats(const History& h) {
  const std::size_t n = std::min<std::size_t>(3, h.size());
  for (std::size_t back = 1; back + 1 <= n; ++back) {
    if (h.opponent_back(back) == kD && h.opponent_back(back + 1) == kD) {
      return kD;
    }
  }
  return kC;
}

Action Bully(const History& h) {
  return h.empty() ? kD : Flip(h.opponent_back(1));
}

Action AntiTitForTat(const History& h) {
  return h.empty() ? kC : Flip(h.opponent_back(1));
}

Action FoolMeOnce(const History& h) {
  return h.opponent_defections() > 1 ? kD : kC;
}

Action GoByMajority(const History& h) {
  return h.opponent_cooperations() >= h.opponent_defections() ? kC : kD;
}

// Tit For Tat until the opponent defects twice in a row, then D forever.
class SpitefulTitForTat final : public Strategy {
 public:
  Action Decide(const History& h, RandomStream&) override {
    if (h.empty()) return kC;
    if (h.size() >= 2 && h.opponent_back(1) == kD && h.opponent_back(2) == kD) {
      spiteful_ = true;
    }
    return spiteful_ ? kD : h.opponent_back(1);
  }

 private:
  bool spiteful_ = false;
};

// Deadlock threshold 3, randomness threshold 8.
class OmegaTitForTat final : public Strategy {
 public:
  Action Decide(const History& h, RandomStream&) override {
    if (h.size() == 0) return kC;
    if (h.size() == 1) return h.opponent_back(1);
    const Action opp_last = h.opponent_back(1);
    const Action opp_prev = h.opponent_back(2);
    if (deadlock_ >= kDeadlockThreshold) {
      deadlock_ = deadlock_ == kDeadlockThreshold ? kDeadlockThreshold + 1 : 0;
      return kC;
    }
    if (opp_prev == kC && opp_last == kC) --randomness_;
    if (opp_prev != opp_last) ++randomness_;
    if (h.own_back(1) != opp_last) ++randomness_;
    if (randomness_ >= kRandomnessThreshold) return kD;
    deadlock_ = opp_prev != opp_last ? deadlock_ + 1 : 0;
    return opp_last;
  }

 private:
  static constexpr int kDeadlockThreshold = 3;
  static constexpr int kRandomnessThreshold = 8;
  int deadlock_ = 0;
  int randomness_ = 0;
};

// After the n-th opponent defection: n defections, then two cooperations.
class Gradual final : public Strategy {
 public:
  Action Decide(const History& h, RandomStream&) override {
    if (calming_) {
      calming_ = false;
      return kC;
    }
    if (punishing_) {
      if (punishment_count_ < punishment_limit_) {
        ++punishment_count_;
        return kD;
      }
      calming_ = true;
      punishing_ = false;
      punishment_count_ = 0;
      return kC;
    }
    if (!h.empty() && h.opponent_back(1) == kD) {
      punishing_ = true;
      ++punishment_count_;
      ++punishment_limit_;
      return kD;
    }
    return kC;
  }

 private:
  bool calming_ = false;
  bool punishing_ = false;
  int punishment_count_ = 0;
  int punishment_limit_ = 0;
};

// Answers a defection with D, D, D, D, C, C.
class SoftGrudger final : public Strategy {
 public:
  Action Decide(const History& h, RandomStream&) override {
    static constexpr std::array<Action, 5> kGrudge = {kD, kD, kD, kC, kC};
    if (grudge_step_ > 0) {
      const Action a = kGrudge[grudge_step_ - 1];
      grudge_step_ = grudge_step_ == kGrudge.size() ? 0 : grudge_step_ + 1;
      return a;
    }
    if (!h.empty() && h.opponent_back(1) == kD) {
      grudge_step_ = 1;
      return kD;
    }
    return kC;
  }

 private:
  std::size_t grudge_step_ = 0;
};

class RandomPlayer final : public Strategy {
 public:
  explicit RandomPlayer(double p) : p_(p) {}
  Action Decide(const History&, RandomStream& rng) override {
    return rng.Bernoulli(p_) ? kC : kD;
  }

 private:
  double p_;
};

struct Entry {
  ClassicInfo info;
  std::function<std::unique_ptr<Strategy>(double)> make;
};

std::function<std::unique_ptr<Strategy>(double)> FromRule(Rule rule) {
  return [rule](double) { return std::make_unique<RuleStrategy>(rule); };
}

template <typename T>
std::function<std::unique_ptr<Strategy>(double)> FromClass() {
  return [](double) { return std::make_unique<T>(); };
}

constexpr std::optional<int> kInfinite = std::nullopt;

const std::vector<Entry>& Entries() {
  static const std::vector<Entry> entries = {
      {{"cooperator", "Cooperator", false, 0}, FromRule(&Cooperator)},
      {{"defector", "Defector", false, 0}, FromRule(&Defector)},
      {{"tit_for_tat", "Tit For Tat", false, 1}, FromRule(&TitForTat)},
      {{"tit_for_two_tats", "Tit For 2 Tats", false, 2},
       FromRule(&TitForTwoTats)},
      {{"two_tits_for_tat", "Two Tits For Tat", false, 2},
       FromRule(&TwoTitsForTat)},
      {{"grudger", "Grudger", false, kInfinite}, FromRule(&Grudger)},
      {{"win_stay_lose_shift", "Win-Stay Lose-Shift", false, 1},
       FromRule(&WinStayLoseShift)},
      {{"spiteful_tit_for_tat", "Spiteful Tit For Tat", false, kInfinite},
       FromClass<SpitefulTitForTat>()},
      {{"omega_tft", "Omega TFT", false, kInfinite},
       FromClass<OmegaTitForTat>()},
      {{"handshake", "Handshake", false, kInfinite}, FromRule(&Handshake)},
      {{"collective_strategy", "CollectiveStrategy", false, kInfinite},
       FromRule(&CollectiveStrategy)},
      {{"aggravater", "Aggravater", false, kInfinite}, FromRule(&Aggravater)},
      {{"alternator", "Alternator", false, 1}, FromRule(&Alternator)},
      {{"cycler_ccd", "Cycler CCD", false, 2}, FromRule(&CyclerCCD)},
      {{"cycler_ddc", "Cycler DDC", false, 2}, FromRule(&CyclerDDC)},
      {{"prober", "Prober", false, kInfinite}, FromRule(&Prober)},
      {{"forgiving_tit_for_tat", "Forgiving Tit For Tat", false, kInfinite},
       FromRule(&ForgivingTitForTat)},
      {{"forgiver", "Forgiver", false, kInfinite}, FromRule(&Forgiver)},
      {{"suspicious_tit_for_tat", "Suspicious Tit For Tat", false, 1},
       FromRule(&SuspiciousTitForTat)},
      {{"hard_tit_for_tat", "Hard Tit For Tat", false, 3},
       FromRule(&HardTitForTat)},
      {{"hard_tit_for_two_tats", "Hard Tit For 2 Tats", false, 3},
       FromRule(&HardTitForTwoTats)},
      {{"bully", "Bully", false, 1}, FromRule(&Bully)},
      {{"anti_tit_for_tat", "Anti Tit For Tat", false, 1},
       FromRule(&AntiTitForTat)},
      {{"fool_me_once", "Fool Me Once", false, kInfinite},
       FromRule(&FoolMeOnce)},
      {{"go_by_majority", "Go By Majority", false, kInfinite},
       FromRule(&GoByMajority)},
      {{"gradual", "Gradual", false, kInfinite}, FromClass<Gradual>()},
      {{"soft_grudger", "Soft Grudger", false, 6}, FromClass<SoftGrudger>()},
      {{"random", "Random", true, 0},
       [](double p) { return std::make_unique<RandomPlayer>(p); }},
  };
  return entries;
}

const Entry* FindEntry(std::string_view key) {
  const auto& entries = Entries();
  const auto it = std::find_if(entries.begin(), entries.end(),
                               [key](const Entry& e) { return e.info.key == key; });
  return it == entries.end() ? nullptr : &*it;
}

}  // namespace

const std::vector<ClassicInfo>& ClassicCatalog() {
  static const std::vector<ClassicInfo> catalog = [] {
    std::vector<ClassicInfo> out;
    for (const Entry& e : Entries()) out.push_back(e.info);
    return out;
  }();
  return catalog;
}

const ClassicInfo* FindClassic(std::string_view key) {
  const Entry* e = FindEntry(key);
  return e == nullptr ? nullptr : &e->info;
}

std::unique_ptr<Strategy> MakeClassic(std::string_view key, double parameter) {
  const Entry* e = FindEntry(key);
  return e == nullptr ? nullptr : e->make(parameter);
}

}  // namespace ipd
