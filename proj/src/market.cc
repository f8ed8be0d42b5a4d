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

#include "matchbandit/market.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace matchbandit {

std::string_view ToString(RewardModel model) {
  switch (model) {
    case RewardModel::kBernoulli:
      return "bernoulli";
    case RewardModel::kGaussianUnitVariance:
      return "gaussian_unit_variance";
  }
  return "unknown";
}

RewardModel ParseRewardModel(std::string_view name) {
  if (name == "bernoulli") return RewardModel::kBernoulli;
  if (name == "gaussian_unit_variance" || name == "gaussian") {
    return RewardModel::kGaussianUnitVariance;
  }
  throw SpecError("unknown reward model: " + std::string(name));
}

// -- Choice functions ---------------------------------------------------------

PlayerSet ResponsiveChoice(std::span<const int> ranking, int capacity, PlayerSet offered) {
  PlayerSet chosen;
  if (capacity <= 0) return chosen;
  int remaining = std::min(capacity, offered.size());
  for (int p : ranking) {
    if (remaining == 0) break;
    if (offered.Contains(p)) {
      chosen.Insert(p);
      --remaining;
    }
  }
  return chosen;
}

PlayerSet GeneralChoice(std::span<const PlayerSet> ranked_subsets, PlayerSet offered) {
  for (PlayerSet s : ranked_subsets) {
    if (s.IsSubsetOf(offered)) return s;
  }
  return PlayerSet();
}

ChoiceFunction ChoiceFunction::Responsive(std::vector<int> ranking, int capacity) {
  ChoiceFunction f;
  f.responsive_ = true;
  f.ranking_ = std::move(ranking);
  f.capacity_ = capacity;
  return f;
}

ChoiceFunction ChoiceFunction::General(std::vector<PlayerSet> ranked_subsets) {
  ChoiceFunction f;
  f.responsive_ = false;
  f.ranked_subsets_ = std::move(ranked_subsets);
  return f;
}

void ChoiceFunction::Validate(int n_players) const {
  if (responsive_) {
    if (capacity_ < 1) throw SpecError("responsive capacity must be >= 1");
    if (static_cast<int>(ranking_.size()) != n_players) {
      throw SpecError("responsive ranking must list every player exactly once");
    }
    std::vector<bool> seen(n_players, false);
    for (int p : ranking_) {
      if (p < 0 || p >= n_players || seen[p]) {
        throw SpecError("responsive ranking is not a permutation of the players");
      }
      seen[p] = true;
    }
    return;
  }
  const PlayerSet all = PlayerSet::All(n_players);
  for (size_t a = 0; a < ranked_subsets_.size(); ++a) {
    if (!ranked_subsets_[a].IsSubsetOf(all)) {
      throw SpecError("choice subset references an unknown player");
    }
    for (size_t b = 0; b < a; ++b) {
      if (ranked_subsets_[a] == ranked_subsets_[b]) {
        throw SpecError("choice subsets must be distinct");
      }
    }
  }
}

SubstitutabilityResult CheckSubstitutable(const ChoiceFunction& choice, int n_players) {
  if (n_players < 0 || n_players > kMaxSubstitutabilityPlayers) {
    throw SpecError("substitutability check supports at most " +
                    std::to_string(kMaxSubstitutabilityPlayers) + " players");
  }
  const uint64_t limit = uint64_t{1} << n_players;
  for (uint64_t bits = 0; bits < limit; ++bits) {
    const PlayerSet offered = PlayerSet::FromBits(bits);
    const PlayerSet chosen = choice.Choose(offered);
    if (chosen.empty()) continue;
    // Witness order: smallest kept player, then smallest removed player.
    int kept = kNone;
    int removed = kNone;
    offered.ForEach([&](int q) {
      const PlayerSet lost = chosen.Without(q) - choice.Choose(offered.Without(q));
      if (lost.empty()) return;
      if (kept == kNone || lost.First() < kept) {
        kept = lost.First();
        removed = q;
      }
    });
    if (kept != kNone) {
      return SubstitutabilityResult{false, SubstitutabilityWitness{offered, kept, removed}};
    }
  }
  return SubstitutabilityResult{};
}

// -- MarketSpec ---------------------------------------------------------------

MarketSpec::MarketSpec(std::vector<std::vector<double>> mu, std::vector<ChoiceFunction> arms,
                       int64_t horizon, RewardModel reward_model)
    : mu_(std::move(mu)), arms_(std::move(arms)), horizon_(horizon), reward_model_(reward_model) {
  const int n = n_players();
  const int k = n_arms();
  if (n < 1 || n > kMaxIndex) throw SpecError("player count must be in [1, 64]");
  if (k < 1 || k > kMaxIndex) throw SpecError("arm count must be in [1, 64]");
  if (horizon_ < 1) throw SpecError("horizon must be >= 1");
  for (const auto& row : mu_) {
    if (static_cast<int>(row.size()) != k) throw SpecError("mu must be an N x K matrix");
    for (double v : row) {
      if (!(v > 0.0 && v <= 1.0)) throw SpecError("every mu value must lie in (0, 1]");
    }
  }
  MinGap(mu_);  // rejects duplicated row entries

  min_capacity_ = std::numeric_limits<int>::max();
  for (int j = 0; j < k; ++j) {
    arms_[j].Validate(n);
    if (!arms_[j].is_responsive()) {
      all_responsive_ = false;
      continue;
    }
    total_capacity_ += arms_[j].capacity();
    if (arms_[j].capacity() < min_capacity_) {
      min_capacity_ = arms_[j].capacity();
      min_capacity_arm_ = j;
    }
  }
  if (!all_responsive_) {
    total_capacity_ = 0;
    min_capacity_ = 0;
    min_capacity_arm_ = kNone;
  }

  order_.resize(n);
  rank_.assign(n, std::vector<int>(k, 0));
  for (int i = 0; i < n; ++i) {
    order_[i].resize(k);
    std::iota(order_[i].begin(), order_[i].end(), 0);
    std::sort(order_[i].begin(), order_[i].end(),
              [&](int a, int b) { return mu_[i][a] > mu_[i][b]; });
    for (int r = 0; r < k; ++r) rank_[i][order_[i][r]] = r;
  }
}

MarketSpec MarketSpec::WithHorizon(int64_t horizon) const {
  return MarketSpec(mu_, arms_, horizon, reward_model_);
}

// -- Matching -----------------------------------------------------------------

Matching::Matching(std::vector<int> assignment, int n_arms)
    : assignment_(std::move(assignment)), arm_sets_(n_arms) {
  for (int i = 0; i < static_cast<int>(assignment_.size()); ++i) {
    const int j = assignment_[i];
    if (j == kNone) continue;
    if (j < 0 || j >= n_arms) throw SpecError("matching references an unknown arm");
    arm_sets_[j].Insert(i);
  }
}

std::string ToString(const Matching& m) {
  std::string out = "[";
  for (int i = 0; i < m.n_players(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(i) + "->";
    out += m.arm_of(i) == kNone ? "-" : std::to_string(m.arm_of(i));
  }
  out += ']';
  return out;
}

// -- Stability ----------------------------------------------------------------

StabilityReport CheckStability(const Matching& m, const MarketSpec& spec) {
  const int n = spec.n_players();
  const int k = spec.n_arms();
  if (m.n_players() != n || m.n_arms() != k) {
    throw SpecError("matching dimensions do not match the market");
  }
  StabilityReport report;
  for (int j = 0; j < k; ++j) {
    const PlayerSet held = m.players_at(j);
    if (spec.arm(j).Choose(held) != held) {
      report.stable = false;
      report.violation = StabilityReport::Violation::kArmImprovement;
      report.arm = j;
      return report;
    }
  }
  for (int i = 0; i < n; ++i) {
    const double current = spec.value(i, m.arm_of(i));
    for (int j = 0; j < k; ++j) {
      if (j == m.arm_of(i) || spec.mu(i, j) <= current) continue;
      if (spec.arm(j).Choose(m.players_at(j).With(i)).Contains(i)) {
        report.stable = false;
        report.violation = StabilityReport::Violation::kBlockingPair;
        report.arm = j;
        report.player = i;
        return report;
      }
    }
  }
  return report;
}

StableMatchingSet EnumerateStableMatchings(const MarketSpec& spec) {
  const int n = spec.n_players();
  const int k = spec.n_arms();
  if (n > kMaxEnumerationPlayers || k > kMaxEnumerationArms) {
    throw SpecError("stable-matching enumeration supports N <= 8 and K <= 5");
  }
  StableMatchingSet out;
  // Odometer over assignments; digit value k means unmatched.
  std::vector<int> digits(n, 0);
  std::vector<int> assignment(n);
  while (true) {
    for (int i = 0; i < n; ++i) assignment[i] = digits[i] == k ? kNone : digits[i];
    Matching m(assignment, k);
    if (IsStable(m, spec)) out.matchings.push_back(std::move(m));
    int pos = 0;
    while (pos < n && ++digits[pos] > k) digits[pos++] = 0;
    if (pos == n) break;
  }
  if (out.matchings.empty()) {
    throw SpecError("market has no stable matching; choice functions are not substitutable");
  }
  out.best_arm.assign(n, kNone);
  out.worst_arm.assign(n, kNone);
  for (int i = 0; i < n; ++i) {
    double best = -1.0;
    double worst = 2.0;
    for (const Matching& m : out.matchings) {
      const int j = m.arm_of(i);
      const double v = spec.value(i, j);
      if (v > best) {
        best = v;
        out.best_arm[i] = j;
      }
      if (v < worst) {
        worst = v;
        out.worst_arm[i] = j;
      }
    }
  }
  return out;
}

// -- Gaps ---------------------------------------------------------------------

GapProfile MinGap(const std::vector<std::vector<double>>& mu) {
  const int n = static_cast<int>(mu.size());
  const int k = n == 0 ? 0 : static_cast<int>(mu[0].size());
  std::vector<double> pairwise(static_cast<size_t>(n) * k * k, 0.0);
  double min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(mu[i].size()) != k) throw SpecError("mu rows differ in length");
    for (int j = 0; j < k; ++j) {
      for (int jj = 0; jj < k; ++jj) {
        if (j == jj) continue;
        const double gap = std::abs(mu[i][j] - mu[i][jj]);
        if (gap == 0.0) {
          throw SpecError("player " + std::to_string(i) +
                          " has equal preference values for two arms");
        }
        pairwise[(static_cast<size_t>(i) * k + j) * k + jj] = gap;
        min_gap = std::min(min_gap, gap);
      }
    }
  }
  return GapProfile(n, k, std::move(pairwise), min_gap);
}

}  // namespace matchbandit
