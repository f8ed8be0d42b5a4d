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

#include "matchbandit/environment.h"

#include <string>

namespace matchbandit {

RoundOutcome ResolveRound(const MarketSpec& spec, std::span<const int> proposals) {
  const int n = spec.n_players();
  const int k = spec.n_arms();
  if (static_cast<int>(proposals.size()) != n) throw SpecError("one proposal per player required");
  std::vector<PlayerSet> offered(k);
  for (int i = 0; i < n; ++i) {
    const int j = proposals[i];
    if (j == kNone) continue;
    if (j < 0 || j >= k) {
      throw SpecError("player " + std::to_string(i) + " proposed to unknown arm " +
                      std::to_string(j));
    }
    offered[j].Insert(i);
  }
  std::vector<int> assignment(n, kNone);
  for (int j = 0; j < k; ++j) {
    spec.arm(j).Choose(offered[j]).ForEach([&](int i) { assignment[i] = j; });
  }
  RoundOutcome out;
  out.proposals.assign(proposals.begin(), proposals.end());
  out.matching = Matching(std::move(assignment), k);
  out.rewards.assign(n, 0.0);
  return out;
}

RewardSampler::RewardSampler(const MarketSpec& spec, uint64_t seed)
    : model_(spec.reward_model()), n_arms_(spec.n_arms()) {
  streams_.reserve(static_cast<size_t>(spec.n_players()) * n_arms_);
  for (int i = 0; i < spec.n_players(); ++i) {
    for (int j = 0; j < n_arms_; ++j) {
      std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                        static_cast<uint32_t>(i), static_cast<uint32_t>(j)};
      streams_.push_back(Stream{std::mt19937_64(seq), std::bernoulli_distribution(spec.mu(i, j)),
                                std::normal_distribution<double>(spec.mu(i, j), 1.0)});
    }
  }
}

double RewardSampler::Sample(int player, int arm) {
  Stream& s = streams_[static_cast<size_t>(player) * n_arms_ + arm];
  if (model_ == RewardModel::kBernoulli) return s.bernoulli(s.engine) ? 1.0 : 0.0;
  return s.gaussian(s.engine);
}

RoundOutcome PlayRound(const MarketSpec& spec, std::span<const int> proposals,
                       RewardSampler& sampler) {
  RoundOutcome out = ResolveRound(spec, proposals);
  for (int i = 0; i < spec.n_players(); ++i) {
    if (out.accepted(i)) out.rewards[i] = sampler.Sample(i, out.proposals[i]);
  }
  return out;
}

}  // namespace matchbandit
