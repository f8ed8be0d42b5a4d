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

#include "matchbandit/oda.h"

#include <algorithm>
#include <limits>
#include <string>

namespace matchbandit {

Oda::Oda(const MarketSpec& spec, const std::optional<Deviation>& deviation)
    : MatchingAlgorithm(spec), deviation_(deviation), history_(spec.n_arms()) {
  players_.reserve(spec.n_players());
  for (int i = 0; i < spec.n_players(); ++i) players_.emplace_back(spec);
  for (int i = 0; i < spec.n_players(); ++i) players_[i].plausible = PlausibleSet(i);
}

ArmSet Oda::PlausibleSet(int player) const {
  ArmSet s;
  for (int j = 0; j < spec_.n_arms(); ++j) {
    if (spec_.arm(j).Choose(players_[player].available[j]).Contains(player)) s.Insert(j);
  }
  return s;
}

std::optional<int> Oda::ProbeArm(int player, int64_t t) const {
  if (!deviation_ || deviation_->player != player ||
      deviation_->policy.kind != DeviationPolicy::Kind::kProbe) {
    return std::nullopt;
  }
  const int arm = deviation_->policy.arm;
  if (players_[player].plausible.Contains(arm) || t % deviation_->policy.period != 0) {
    return std::nullopt;
  }
  return arm;
}

std::vector<int> Oda::Propose(int64_t t) {
  const int n = spec_.n_players();
  std::vector<int> proposals(n, kNone);
  for (int i = 0; i < n; ++i) {
    if (const auto probe = ProbeArm(i, t)) {
      proposals[i] = *probe;
      events_.Add(i, "probe", std::to_string(*probe));
      continue;
    }
    Player& p = players_[i];
    if (p.plausible.empty()) {
      events_.Add(i, "empty_plausible");
      continue;
    }
    int next = p.plausible.NextAfter(p.cursor);
    if (next == kNone) next = p.plausible.First();
    p.cursor = next;
    proposals[i] = next;
  }
  return proposals;
}

void Oda::Observe(int64_t t, const RoundOutcome& outcome) {
  const int n = spec_.n_players();
  const int k = spec_.n_arms();
  const Matching& now = outcome.matching;

  for (int i = 0; i < n; ++i) {
    Player& p = players_[i];
    if (outcome.accepted(i)) p.stats.Update(outcome.proposals[i], outcome.rewards[i]);

    double best_lcb = -std::numeric_limits<double>::infinity();
    p.plausible.ForEach([&](int j) { best_lcb = std::max(best_lcb, p.stats.lcb(j)); });
    p.plausible.ForEach([&](int j) {
      if (p.stats.ucb(j) < best_lcb) {
        p.plausible.Erase(j);
        events_.Add(i, "prune", std::to_string(j));
      }
    });
  }

  if (t >= 2 && previous_ && *previous_ == now) {
    ++sync_triggers_;
    bool struck_any = false;
    for (int i = 0; i < n; ++i) {
      Player& p = players_[i];
      for (int j = 0; j < k; ++j) {
        const PlayerSet struck = (history_[j] - now.players_at(j)) & p.available[j];
        if (struck.empty()) continue;
        p.available[j] = p.available[j] - struck;
        struck_any = true;
        std::string detail = std::to_string(j) + "=";
        struck.ForEach([&](int x) { detail += (detail.back() == '=' ? "" : "+") + std::to_string(x); });
        events_.Add(i, "strike", detail);
      }
      p.plausible = PlausibleSet(i);
    }
    if (struck_any) {
      ++effective_syncs_;
      for (int i = 0; i < n; ++i) events_.Add(i, "sync");
    }
  }

  if (previous_) {
    for (int j = 0; j < k; ++j) history_[j] = history_[j] | previous_->players_at(j);
  }
  previous_ = now;
}

}  // namespace matchbandit
