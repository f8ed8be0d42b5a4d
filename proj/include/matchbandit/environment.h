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

// The round engine: simultaneous proposals are resolved through each arm's
// choice function, accepted players draw rewards, and everybody observes the
// full matching.

#ifndef MATCHBANDIT_ENVIRONMENT_H_
#define MATCHBANDIT_ENVIRONMENT_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "matchbandit/market.h"

namespace matchbandit {

struct RoundOutcome {
  std::vector<int> proposals;   // arm or kNone (skip)
  Matching matching;            // who was accepted where
  std::vector<double> rewards;  // 0 unless accepted

  bool accepted(int player) const {
    return proposals[player] != kNone && matching.arm_of(player) == proposals[player];
  }
};

// Fills proposals and matching; rewards are left at 0. Throws SpecError on
// an out-of-range proposal.
RoundOutcome ResolveRound(const MarketSpec& spec, std::span<const int> proposals);

// Independent reward stream per (player, arm), all derived from one master
// seed. The n-th draw of a pair does not depend on what other pairs did.
class RewardSampler {
 public:
  RewardSampler(const MarketSpec& spec, uint64_t seed);

  double Sample(int player, int arm);

 private:
  struct Stream {
    std::mt19937_64 engine;
    std::bernoulli_distribution bernoulli;
    std::normal_distribution<double> gaussian;
  };

  RewardModel model_;
  int n_arms_;
  std::vector<Stream> streams_;
};

// Resolves proposals and samples rewards for the accepted players.
RoundOutcome PlayRound(const MarketSpec& spec, std::span<const int> proposals,
                       RewardSampler& sampler);

}  // namespace matchbandit

#endif  // MATCHBANDIT_ENVIRONMENT_H_
