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

// Online deferred acceptance for substitutable markets. Every player keeps,
// per arm, the set of players that have not yet rejected that arm, and only
// proposes to arms that would choose it from that set. Dominated arms are
// pruned by confidence bounds. When the whole matching repeats in two
// consecutive rounds, players that left an arm they had been matched to
// before are struck from that arm's set, which mirrors one rejection step of
// arm-proposing deferred acceptance.

#ifndef MATCHBANDIT_ODA_H_
#define MATCHBANDIT_ODA_H_

#include <optional>
#include <vector>

#include "matchbandit/algorithm.h"

namespace matchbandit {

class Oda : public MatchingAlgorithm {
 public:
  Oda(const MarketSpec& spec, const std::optional<Deviation>& deviation);

  std::vector<int> Propose(int64_t t) override;
  void Observe(int64_t t, const RoundOutcome& outcome) override;
  const LearnerStats& stats(int player) const override { return players_[player].stats; }

  // Player `player`'s copy of the per-arm available player sets.
  const std::vector<PlayerSet>& available_players(int player) const {
    return players_[player].available;
  }
  ArmSet plausible(int player) const { return players_[player].plausible; }

  // Rounds in which the repeat trigger fired, and those among them that
  // struck at least one player from some arm.
  int64_t sync_triggers() const { return sync_triggers_; }
  int64_t effective_syncs() const { return effective_syncs_; }

 private:
  struct Player {
    explicit Player(const MarketSpec& spec)
        : stats(spec.n_arms(), spec.horizon()),
          available(spec.n_arms(), PlayerSet::All(spec.n_players())) {}

    LearnerStats stats;
    std::vector<PlayerSet> available;
    ArmSet plausible;
    int cursor = kNone;
  };

  ArmSet PlausibleSet(int player) const;
  std::optional<int> ProbeArm(int player, int64_t t) const;

  std::optional<Deviation> deviation_;
  std::vector<Player> players_;
  // Public history: who sat at each arm in any round up to t-2, and the
  // matching of round t-1.
  std::vector<PlayerSet> history_;
  std::optional<Matching> previous_;
  int64_t sync_triggers_ = 0;
  int64_t effective_syncs_ = 0;
};

}  // namespace matchbandit

#endif  // MATCHBANDIT_ODA_H_
