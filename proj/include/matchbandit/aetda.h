// Copyright 2026 The matchbandit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Adaptively explore-then-DA. Every player keeps an available arm set and an
// exploration flag. Exploring players cycle through unit-capacity virtual
// slots (arm 0's slots first, then arm 1's, ...) and skip slots whose arm is
// no longer available; committed players stay on their reported optimum. A
// reported optimum commits the player, and an arm drops out of a player's
// available set once the arm would not take the player next to those
// committed to it.
//
// In decentralized mode the status refresh only runs at the end of rounds
// 2, 6, 14, 30, ... (phases of length 2, 4, 8, ...), where it is repeated
// until the reports settle.

#ifndef MATCHBANDIT_AETDA_H_
#define MATCHBANDIT_AETDA_H_

#include <optional>
#include <vector>

#include "matchbandit/algorithm.h"

namespace matchbandit {

class Aetda : public MatchingAlgorithm {
 public:
  // The arm whose LCB beats every other available arm's UCB, or kNone. A
  // single available arm is reported even without samples.
  static int ReportOpt(const LearnerStats& stats, ArmSet available);

  // True for t = 2^(k+1) - 2, k >= 1.
  static bool IsPhaseBoundary(int64_t t);

  Aetda(const MarketSpec& spec, bool decentralized, const std::optional<Deviation>& deviation);

  std::vector<int> Propose(int64_t t) override;
  void Observe(int64_t t, const RoundOutcome& outcome) override;
  const LearnerStats& stats(int player) const override { return players_[player].stats; }

  ArmSet available(int player) const { return players_[player].available; }
  bool exploring(int player) const { return players_[player].exploring; }
  // Last reported status (kNone for -1).
  int opt(int player) const { return players_[player].opt; }
  // Arm proposed while not exploring.
  int focus(int player) const { return players_[player].focus; }
  // Parent arm of each virtual slot.
  const std::vector<int>& slots() const { return slot_arm_; }
  // Rounds that ended with a status refresh.
  int64_t refreshes() const { return refreshes_; }

  // Runs the status refresh with the given reported optima and returns
  // whether any opt or available set changed. Exposed so the detection rule
  // can be exercised directly.
  bool Refresh(const std::vector<int>& reports);

 private:
  struct Player {
    explicit Player(const MarketSpec& spec)
        : stats(spec.n_arms(), spec.horizon()), available(ArmSet::All(spec.n_arms())) {}

    LearnerStats stats;
    ArmSet available;
    bool exploring = true;
    int opt = kNone;
    int focus = kNone;
  };

  int Report(int player) const;

  bool decentralized_;
  std::optional<Deviation> deviation_;
  std::vector<int> slot_arm_;
  std::vector<Player> players_;
  int64_t refreshes_ = 0;
};

}  // namespace matchbandit

#endif  // MATCHBANDIT_AETDA_H_
