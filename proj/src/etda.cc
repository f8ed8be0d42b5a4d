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

#include "matchbandit/etda.h"

#include <algorithm>
#include <numeric>
#include <string>

namespace matchbandit {

Etda::ScheduleSlot Etda::Schedule(int64_t t, int n_players) {
  if (t <= n_players) return {Step::kIndexing, 0};
  int64_t start = n_players + 1;  // first round of the current epoch
  int epoch = 1;
  while (true) {
    const int64_t length = (int64_t{1} << epoch) + 1;
    if (t < start + length) {
      return {t == start + length - 1 ? Step::kCommunication : Step::kExploring, epoch};
    }
    start += length;
    ++epoch;
  }
}

std::optional<std::vector<int>> Etda::ResolveRanking(const LearnerStats& stats) {
  const int k = stats.n_arms();
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  for (int j = 0; j < k; ++j) {
    if (stats.count(j) == 0 && k > 1) return std::nullopt;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return stats.mean(a) > stats.mean(b); });
  for (int r = 0; r + 1 < k; ++r) {
    if (!(stats.lcb(order[r]) > stats.ucb(order[r + 1]))) return std::nullopt;
  }
  return order;
}

Etda::Etda(const MarketSpec& spec, const std::optional<Deviation>& deviation)
    : MatchingAlgorithm(spec), deviation_(deviation), j_min_(spec.min_capacity_arm()) {
  players_.reserve(spec.n_players());
  for (int i = 0; i < spec.n_players(); ++i) players_.emplace_back(spec);
}

bool Etda::never_resolves(int player) const {
  return deviation_ && deviation_->player == player &&
         deviation_->policy.kind == DeviationPolicy::Kind::kNeverResolve;
}

std::vector<int> Etda::Propose(int64_t t) {
  const int n = spec_.n_players();
  const int k = spec_.n_arms();
  const ScheduleSlot slot = Schedule(t, n);
  std::vector<int> proposals(n, kNone);
  for (int i = 0; i < n; ++i) {
    Player& p = players_[i];
    p.resolved.reset();
    if (p.in_da) {
      if (p.s < k) proposals[i] = p.sigma[p.s];
      continue;
    }
    switch (slot.step) {
      case Step::kIndexing:
        proposals[i] = p.index == 0 ? j_min_ : (j_min_ + 1) % k;
        break;
      case Step::kExploring:
        proposals[i] = static_cast<int>((p.index + t - 1) % k);
        break;
      case Step::kCommunication:
        if (never_resolves(i)) break;
        p.resolved = ResolveRanking(p.stats);
        if (p.resolved) proposals[i] = p.index - 1;
        break;
    }
  }
  return proposals;
}

void Etda::Observe(int64_t t, const RoundOutcome& outcome) {
  const int n = spec_.n_players();
  const int k = spec_.n_arms();
  const ScheduleSlot slot = Schedule(t, n);
  int matched = 0;
  for (int i = 0; i < n; ++i) {
    if (outcome.matching.arm_of(i) != kNone) ++matched;
  }
  for (int i = 0; i < n; ++i) {
    Player& p = players_[i];
    const bool accepted = outcome.accepted(i);
    if (accepted) p.stats.Update(outcome.proposals[i], outcome.rewards[i]);

    if (p.in_da) {
      if (outcome.proposals[i] != kNone && !accepted) {
        ++p.s;
        events_.Add(i, "da_reject", std::to_string(outcome.proposals[i]));
        if (p.s >= k) events_.Add(i, "da_exhausted");
      }
      continue;
    }
    if (slot.step == Step::kIndexing) {
      if (p.index == 0 && accepted && outcome.proposals[i] == j_min_) {
        p.index = static_cast<int>(t);
        events_.Add(i, "index", std::to_string(t));
      }
    } else if (slot.step == Step::kCommunication) {
      if (p.resolved) events_.Add(i, "resolved");
      if (p.resolved && matched == n) {
        p.in_da = true;
        p.sigma = *p.resolved;
        p.s = 0;
        events_.Add(i, "enter_da", std::to_string(slot.epoch));
        if (da_start_ == 0) da_start_ = t + 1;
      }
    } else if (outcome.proposals[i] != kNone && !accepted) {
      events_.Add(i, "explore_reject");
    }
  }
}

}  // namespace matchbandit
