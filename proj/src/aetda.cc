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

#include "matchbandit/aetda.h"

#include <algorithm>
#include <limits>
#include <string>

namespace matchbandit {

int Aetda::ReportOpt(const LearnerStats& stats, ArmSet available) {
  if (available.size() == 1) return available.First();
  int found = kNone;
  available.ForEach([&](int j) {
    if (found != kNone) return;
    double best_other = -std::numeric_limits<double>::infinity();
    available.Without(j).ForEach([&](int jj) { best_other = std::max(best_other, stats.ucb(jj)); });
    if (stats.lcb(j) > best_other) found = j;
  });
  return found;
}

bool Aetda::IsPhaseBoundary(int64_t t) {
  if (t < 2) return false;
  const int64_t x = t + 2;
  return (x & (x - 1)) == 0;
}

Aetda::Aetda(const MarketSpec& spec, bool decentralized, const std::optional<Deviation>& deviation)
    : MatchingAlgorithm(spec), decentralized_(decentralized), deviation_(deviation) {
  for (int j = 0; j < spec.n_arms(); ++j) {
    slot_arm_.insert(slot_arm_.end(), spec.arm(j).capacity(), j);
  }
  players_.reserve(spec.n_players());
  for (int i = 0; i < spec.n_players(); ++i) players_.emplace_back(spec);
}

std::vector<int> Aetda::Propose(int64_t t) {
  const int n = spec_.n_players();
  const int64_t c = static_cast<int64_t>(slot_arm_.size());
  std::vector<int> proposals(n, kNone);
  for (int i = 0; i < n; ++i) {
    const Player& p = players_[i];
    if (!p.exploring) {
      proposals[i] = p.focus;
      continue;
    }
    if (p.available.empty()) {
      throw RunAborted("player " + std::to_string(i) + " is exploring with no available arm at round " +
                       std::to_string(t));
    }
    const int arm = slot_arm_[static_cast<size_t>((i + t - 1) % c)];
    if (p.available.Contains(arm)) proposals[i] = arm;
  }
  return proposals;
}

int Aetda::Report(int player) const {
  const Player& p = players_[player];
  if (deviation_ && deviation_->player == player) {
    switch (deviation_->policy.kind) {
      case DeviationPolicy::Kind::kAlwaysMinusOne:
        return kNone;
      case DeviationPolicy::Kind::kWrongArm:
        return deviation_->policy.arm;
      default:
        break;
    }
  }
  return ReportOpt(p.stats, p.available);
}

void Aetda::Observe(int64_t t, const RoundOutcome& outcome) {
  for (int i = 0; i < spec_.n_players(); ++i) {
    if (outcome.accepted(i)) players_[i].stats.Update(outcome.proposals[i], outcome.rewards[i]);
  }
  if (decentralized_ && !IsPhaseBoundary(t)) return;
  ++refreshes_;
  std::vector<int> reports(spec_.n_players());
  // Central mode refreshes once per round. At a phase boundary players keep
  // exchanging reports until nothing changes; available sets only shrink, so
  // this stops after at most N K + 1 exchanges.
  bool changed = true;
  while (changed) {
    for (int i = 0; i < spec_.n_players(); ++i) reports[i] = Report(i);
    changed = Refresh(reports) && decentralized_;
  }
  if (decentralized_) {
    for (int i = 0; i < spec_.n_players(); ++i) events_.Add(i, "phase_sync", std::to_string(t));
  }
}

bool Aetda::Refresh(const std::vector<int>& reports) {
  const int n = spec_.n_players();
  bool changed = false;
  std::vector<PlayerSet> holders(spec_.n_arms());
  for (int i = 0; i < n; ++i) {
    Player& p = players_[i];
    if (reports[i] != p.opt) {
      events_.Add(i, "opt", std::to_string(reports[i]));
      changed = true;
    }
    p.opt = reports[i];
    if (p.opt == kNone) continue;
    holders[p.opt].Insert(i);
    if (p.exploring) events_.Add(i, "commit", std::to_string(p.opt));
    p.exploring = false;
    p.focus = p.opt;
  }
  for (int i = 0; i < n; ++i) {
    Player& p = players_[i];
    p.available.ForEach([&](int j) {
      if (spec_.arm(j).Choose(holders[j].With(i)).Contains(i)) return;
      p.available.Erase(j);
      changed = true;
      events_.Add(i, "remove", std::to_string(j));
      if (!p.exploring && j == p.opt) {
        p.exploring = true;
        events_.Add(i, "reexplore");
      }
    });
  }
  return changed;
}

}  // namespace matchbandit
