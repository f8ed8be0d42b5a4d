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

// Ground-truth model of a two-sided many-to-one market: players with
// preference values over arms, arms with choice functions over player sets,
// stability checking and the brute-force stable-matching oracle.

#ifndef MATCHBANDIT_MARKET_H_
#define MATCHBANDIT_MARKET_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "matchbandit/index_set.h"

namespace matchbandit {

// Thrown for malformed markets and violated preconditions of the oracles.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class RewardModel { kBernoulli, kGaussianUnitVariance };

std::string_view ToString(RewardModel model);
RewardModel ParseRewardModel(std::string_view name);

// Top min(|offered|, capacity) members of `offered` in `ranking` order.
PlayerSet ResponsiveChoice(std::span<const int> ranking, int capacity, PlayerSet offered);

// First listed subset contained in `offered`; the empty set is implicitly
// ranked last.
PlayerSet GeneralChoice(std::span<const PlayerSet> ranked_subsets, PlayerSet offered);

// An arm's choice function Ch_j. Either responsive (strict ranking over
// individual players plus a capacity) or general (strictly ranked list of
// acceptable subsets).
class ChoiceFunction {
 public:
  static ChoiceFunction Responsive(std::vector<int> ranking, int capacity);
  static ChoiceFunction General(std::vector<PlayerSet> ranked_subsets);

  PlayerSet Choose(PlayerSet offered) const {
    return responsive_ ? ResponsiveChoice(ranking_, capacity_, offered)
                       : GeneralChoice(ranked_subsets_, offered);
  }

  bool is_responsive() const { return responsive_; }
  // Responsive only.
  const std::vector<int>& ranking() const { return ranking_; }
  int capacity() const { return capacity_; }
  // General only.
  const std::vector<PlayerSet>& ranked_subsets() const { return ranked_subsets_; }

  // Throws SpecError unless the function is well formed for `n_players`.
  void Validate(int n_players) const;

  bool operator==(const ChoiceFunction&) const = default;

 private:
  ChoiceFunction() = default;

  bool responsive_ = true;
  std::vector<int> ranking_;
  int capacity_ = 0;
  std::vector<PlayerSet> ranked_subsets_;
};

struct SubstitutabilityWitness {
  PlayerSet offered;
  int kept = kNone;     // in Ch(offered)
  int removed = kNone;  // whose removal drops `kept`
};

struct SubstitutabilityResult {
  bool substitutable = true;
  std::optional<SubstitutabilityWitness> witness;
};

inline constexpr int kMaxSubstitutabilityPlayers = 20;

// Exhaustive check of: p in Ch(P) implies p in Ch(P \ {q}) for every q != p.
// Throws SpecError when n_players exceeds kMaxSubstitutabilityPlayers.
SubstitutabilityResult CheckSubstitutable(const ChoiceFunction& choice, int n_players);

// The ground-truth world. Immutable after construction; the constructor
// enforces every invariant and throws SpecError otherwise.
class MarketSpec {
 public:
  MarketSpec(std::vector<std::vector<double>> mu, std::vector<ChoiceFunction> arms,
             int64_t horizon, RewardModel reward_model = RewardModel::kBernoulli);

  int n_players() const { return static_cast<int>(mu_.size()); }
  int n_arms() const { return static_cast<int>(arms_.size()); }
  double mu(int player, int arm) const { return mu_[player][arm]; }
  const std::vector<double>& mu_row(int player) const { return mu_[player]; }
  const std::vector<std::vector<double>>& mu() const { return mu_; }
  const ChoiceFunction& arm(int j) const { return arms_[j]; }
  const std::vector<ChoiceFunction>& arms() const { return arms_; }
  int64_t horizon() const { return horizon_; }
  RewardModel reward_model() const { return reward_model_; }

  // Value of being matched to `arm`; 0 when arm is kNone.
  double value(int player, int arm) const { return arm == kNone ? 0.0 : mu_[player][arm]; }

  bool all_responsive() const { return all_responsive_; }
  // Responsive markets only (0 otherwise).
  int total_capacity() const { return total_capacity_; }
  int min_capacity() const { return min_capacity_; }
  // First arm attaining min_capacity(), kNone for general markets.
  int min_capacity_arm() const { return min_capacity_arm_; }

  // N <= C.
  bool aetda_precondition() const { return all_responsive_ && n_players() <= total_capacity_; }
  // N <= K * C_min.
  bool etda_precondition() const {
    return all_responsive_ && n_players() <= n_arms() * min_capacity_;
  }

  // Arms sorted by decreasing mu for `player`.
  const std::vector<int>& preference_order(int player) const { return order_[player]; }
  // 0 for the most preferred arm; n_arms() for kNone.
  int rank(int player, int arm) const { return arm == kNone ? n_arms() : rank_[player][arm]; }

  MarketSpec WithHorizon(int64_t horizon) const;

  bool operator==(const MarketSpec& other) const {
    return mu_ == other.mu_ && arms_ == other.arms_ && horizon_ == other.horizon_ &&
           reward_model_ == other.reward_model_;
  }

 private:
  std::vector<std::vector<double>> mu_;
  std::vector<ChoiceFunction> arms_;
  int64_t horizon_;
  RewardModel reward_model_;

  bool all_responsive_ = true;
  int total_capacity_ = 0;
  int min_capacity_ = 0;
  int min_capacity_arm_ = kNone;
  std::vector<std::vector<int>> order_;
  std::vector<std::vector<int>> rank_;
};

// Assignment of each player to one arm or kNone, with the per-arm inverse.
class Matching {
 public:
  Matching() = default;
  Matching(std::vector<int> assignment, int n_arms);
  static Matching Empty(int n_players, int n_arms) {
    return Matching(std::vector<int>(n_players, kNone), n_arms);
  }

  int n_players() const { return static_cast<int>(assignment_.size()); }
  int n_arms() const { return static_cast<int>(arm_sets_.size()); }
  int arm_of(int player) const { return assignment_[player]; }
  PlayerSet players_at(int arm) const { return arm_sets_[arm]; }
  const std::vector<int>& assignment() const { return assignment_; }
  const std::vector<PlayerSet>& arm_sets() const { return arm_sets_; }

  bool operator==(const Matching& other) const { return assignment_ == other.assignment_; }

 private:
  std::vector<int> assignment_;
  std::vector<PlayerSet> arm_sets_;
};

// "[0->1, 1->-, 2->0]"
std::string ToString(const Matching& m);

struct StabilityReport {
  enum class Violation { kNone, kArmImprovement, kBlockingPair };

  bool stable = true;
  Violation violation = Violation::kNone;
  int arm = kNone;
  int player = kNone;  // set for blocking pairs
};

// A matching is unstable if some arm would drop one of its players, or some
// player strictly prefers an arm that would accept it alongside its current
// players. Unmatched players have value 0.
StabilityReport CheckStability(const Matching& m, const MarketSpec& spec);
inline bool IsStable(const Matching& m, const MarketSpec& spec) {
  return CheckStability(m, spec).stable;
}

inline constexpr int kMaxEnumerationPlayers = 8;
inline constexpr int kMaxEnumerationArms = 5;

struct StableMatchingSet {
  std::vector<Matching> matchings;
  // Per player: the arm with the highest / lowest value across all stable
  // matchings (kNone when unmatched there).
  std::vector<int> best_arm;
  std::vector<int> worst_arm;
};

// Brute force over all (K+1)^N assignments. Throws SpecError outside the
// enumeration bounds or when no stable matching exists.
StableMatchingSet EnumerateStableMatchings(const MarketSpec& spec);

class GapProfile {
 public:
  GapProfile(int n_players, int n_arms, std::vector<double> pairwise, double min_gap)
      : n_players_(n_players), n_arms_(n_arms), pairwise_(std::move(pairwise)), min_gap_(min_gap) {}

  double pairwise(int player, int arm, int other_arm) const {
    return pairwise_[(static_cast<size_t>(player) * n_arms_ + arm) * n_arms_ + other_arm];
  }
  double min_gap() const { return min_gap_; }

 private:
  int n_players_;
  int n_arms_;
  std::vector<double> pairwise_;
  double min_gap_;
};

// |mu[i][j] - mu[i][j']| for all i and j != j', and their minimum (+inf when
// every row has a single arm). Throws SpecError on a duplicated row entry.
GapProfile MinGap(const std::vector<std::vector<double>>& mu);

}  // namespace matchbandit

#endif  // MATCHBANDIT_MARKET_H_
