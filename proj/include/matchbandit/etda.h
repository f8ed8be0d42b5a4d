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

// Explore-then-DA. Players first take indices from the arm with the smallest
// capacity, then explore arms round-robin by index in doubling epochs, each
// closed by a communication round in which every player that has separated
// all its confidence intervals proposes to the arm named by its index. Once a
// communication round shows every player matched, everybody switches to
// player-proposing deferred acceptance on the learned rankings.

#ifndef MATCHBANDIT_ETDA_H_
#define MATCHBANDIT_ETDA_H_

#include <optional>
#include <vector>

#include "matchbandit/algorithm.h"

namespace matchbandit {

class Etda : public MatchingAlgorithm {
 public:
  enum class Step { kIndexing, kExploring, kCommunication };

  struct ScheduleSlot {
    Step step = Step::kIndexing;
    int epoch = 0;  // 1-based for exploring and communication rounds
  };

  // What the fixed schedule prescribes for round t before the DA phase:
  // N indexing rounds, then epochs of 2^l exploration rounds followed by
  // one communication round.
  static ScheduleSlot Schedule(int64_t t, int n_players);

  // Arms sorted by decreasing estimate if all adjacent confidence intervals
  // are strictly separated; nullopt otherwise.
  static std::optional<std::vector<int>> ResolveRanking(const LearnerStats& stats);

  Etda(const MarketSpec& spec, const std::optional<Deviation>& deviation);

  std::vector<int> Propose(int64_t t) override;
  void Observe(int64_t t, const RoundOutcome& outcome) override;
  const LearnerStats& stats(int player) const override { return players_[player].stats; }

  // 1-based; 0 until assigned.
  int index(int player) const { return players_[player].index; }
  bool in_da(int player) const { return players_[player].in_da; }
  // The ranking the player entered DA with; empty before that.
  const std::vector<int>& sigma(int player) const { return players_[player].sigma; }
  // Position in sigma the player is currently proposing to.
  int da_pointer(int player) const { return players_[player].s; }
  // Round in which the DA phase began, or 0.
  int64_t da_start() const { return da_start_; }

 private:
  struct Player {
    explicit Player(const MarketSpec& spec) : stats(spec.n_arms(), spec.horizon()) {}

    LearnerStats stats;
    int index = 0;
    bool in_da = false;
    std::vector<int> sigma;
    int s = 0;
    std::optional<std::vector<int>> resolved;  // ranking offered in this communication round
  };

  bool never_resolves(int player) const;

  std::optional<Deviation> deviation_;
  int j_min_;
  std::vector<Player> players_;
  int64_t da_start_ = 0;
};

}  // namespace matchbandit

#endif  // MATCHBANDIT_ETDA_H_
