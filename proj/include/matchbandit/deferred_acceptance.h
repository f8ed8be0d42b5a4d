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

// Offline deferred acceptance in both directions. These are the regret
// referees and the reference for what the online algorithms should reach.

#ifndef MATCHBANDIT_DEFERRED_ACCEPTANCE_H_
#define MATCHBANDIT_DEFERRED_ACCEPTANCE_H_

#include <string>
#include <vector>

#include "matchbandit/market.h"

namespace matchbandit {

enum class DaDirection { kPlayerProposing, kArmProposing };

struct DaStep {
  // proposals[x] lists whom proposer x proposed to in this step.
  // rejections[y] lists the proposers receiver y turned away.
  // Player-proposing: proposers are players, receivers are arms.
  // Arm-proposing: the other way round.
  std::vector<std::vector<int>> proposals;
  std::vector<std::vector<int>> rejections;
};

struct DaTrace {
  DaDirection direction = DaDirection::kPlayerProposing;
  std::vector<DaStep> steps;
  Matching final;
  int step_count = 0;
  int rejection_count = 0;
  // Players rejected by every arm (player-proposing) or never held by any
  // arm at the end (arm-proposing).
  PlayerSet unmatched;
};

DaTrace DaPlayerProposing(const MarketSpec& spec);
DaTrace DaArmProposing(const MarketSpec& spec);

// Step-indexed JSON document, stable across runs.
std::string DaTraceToJson(const DaTrace& trace);

}  // namespace matchbandit

#endif  // MATCHBANDIT_DEFERRED_ACCEPTANCE_H_
