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

#include "matchbandit/deferred_acceptance.h"

#include "json.hpp"

namespace matchbandit {

DaTrace DaPlayerProposing(const MarketSpec& spec) {
  const int n = spec.n_players();
  const int k = spec.n_arms();
  DaTrace trace;
  trace.direction = DaDirection::kPlayerProposing;

  std::vector<int> next(n, 0);  // position in the player's preference order
  std::vector<PlayerSet> holds(k);
  std::vector<int> held_at(n, kNone);

  while (true) {
    DaStep step;
    step.proposals.assign(n, {});
    step.rejections.assign(k, {});
    std::vector<PlayerSet> offered = holds;
    bool any_proposal = false;
    for (int i = 0; i < n; ++i) {
      if (held_at[i] != kNone || next[i] >= k) continue;
      const int j = spec.preference_order(i)[next[i]];
      step.proposals[i].push_back(j);
      offered[j].Insert(i);
      any_proposal = true;
    }
    if (!any_proposal) break;

    bool any_rejection = false;
    for (int j = 0; j < k; ++j) {
      const PlayerSet kept = spec.arm(j).Choose(offered[j]);
      const PlayerSet dropped = offered[j] - kept;
      dropped.ForEach([&](int i) {
        step.rejections[j].push_back(i);
        held_at[i] = kNone;
        ++next[i];
        ++trace.rejection_count;
        any_rejection = true;
      });
      kept.ForEach([&](int i) { held_at[i] = j; });
      holds[j] = kept;
    }
    trace.steps.push_back(std::move(step));
    ++trace.step_count;
    if (!any_rejection) break;
  }

  trace.final = Matching(held_at, k);
  for (int i = 0; i < n; ++i) {
    if (held_at[i] == kNone) trace.unmatched.Insert(i);
  }
  return trace;
}

DaTrace DaArmProposing(const MarketSpec& spec) {
  const int n = spec.n_players();
  const int k = spec.n_arms();
  DaTrace trace;
  trace.direction = DaDirection::kArmProposing;

  // available[j]: players that have not rejected arm j.
  std::vector<PlayerSet> available(k, PlayerSet::All(n));
  std::vector<int> held(n, kNone);

  while (true) {
    DaStep step;
    step.proposals.assign(k, {});
    step.rejections.assign(n, {});
    std::vector<ArmSet> offers(n);
    bool any_proposal = false;
    for (int j = 0; j < k; ++j) {
      const PlayerSet target = spec.arm(j).Choose(available[j]);
      target.ForEach([&](int i) {
        step.proposals[j].push_back(i);
        offers[i].Insert(j);
        any_proposal = true;
      });
    }
    if (!any_proposal) break;

    bool any_rejection = false;
    for (int i = 0; i < n; ++i) {
      int best = kNone;
      offers[i].ForEach([&](int j) {
        if (best == kNone || spec.mu(i, j) > spec.mu(i, best)) best = j;
      });
      offers[i].ForEach([&](int j) {
        if (j == best) return;
        step.rejections[i].push_back(j);
        available[j].Erase(i);
        ++trace.rejection_count;
        any_rejection = true;
      });
      held[i] = best;
    }
    trace.steps.push_back(std::move(step));
    ++trace.step_count;
    if (!any_rejection) break;
  }

  trace.final = Matching(held, k);
  for (int i = 0; i < n; ++i) {
    if (held[i] == kNone) trace.unmatched.Insert(i);
  }
  return trace;
}

std::string DaTraceToJson(const DaTrace& trace) {
  nlohmann::ordered_json doc;
  doc["direction"] =
      trace.direction == DaDirection::kPlayerProposing ? "player_proposing" : "arm_proposing";
  doc["step_count"] = trace.step_count;
  doc["rejection_count"] = trace.rejection_count;
  auto steps = nlohmann::ordered_json::array();
  for (size_t s = 0; s < trace.steps.size(); ++s) {
    nlohmann::ordered_json step;
    step["step"] = s + 1;
    step["proposals"] = trace.steps[s].proposals;
    step["rejections"] = trace.steps[s].rejections;
    steps.push_back(std::move(step));
  }
  doc["steps"] = std::move(steps);
  doc["final"] = trace.final.assignment();
  doc["unmatched"] = trace.unmatched.Members();
  return doc.dump(2) + "\n";
}

}  // namespace matchbandit
