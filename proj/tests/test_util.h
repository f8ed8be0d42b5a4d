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

// Fixtures and independent brute-force oracles shared by the tests. The
// oracles deliberately avoid the library's set type and choice code.

#ifndef MATCHBANDIT_TESTS_TEST_UTIL_H_
#define MATCHBANDIT_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "matchbandit/market.h"

namespace matchbandit::testing {

inline std::string DataPath(const std::string& name) {
  return std::string(MATCHBANDIT_DATA_DIR) + "/" + name;
}

// Three players, two arms; arm 0 has a non-responsive substitutable choice
// function, arm 1 only ever takes player 2.
inline MarketSpec Example1Market(int64_t horizon = 100000) {
  std::vector<ChoiceFunction> arms = {
      ChoiceFunction::General({PlayerSet::Of({0, 1}), PlayerSet::Of({0, 2}), PlayerSet::Of({1, 2}),
                               PlayerSet::Of({2}), PlayerSet::Of({1}), PlayerSet::Of({0})}),
      ChoiceFunction::General({PlayerSet::Of({2})}),
  };
  return MarketSpec({{0.9, 0.1}, {0.8, 0.2}, {0.4, 0.7}}, std::move(arms), horizon);
}

// Unique stable matching {p0 -> a0, p1 -> a1}.
inline MarketSpec TwoByTwoMarket(int64_t horizon = 100000) {
  return MarketSpec({{0.9, 0.5}, {0.8, 0.6}},
                    {ChoiceFunction::Responsive({0, 1}, 1), ChoiceFunction::Responsive({0, 1}, 1)},
                    horizon);
}

inline MarketSpec SingleMarket(double mu, int64_t horizon = 10) {
  return MarketSpec({{mu}}, {ChoiceFunction::Responsive({0}, 1)}, horizon);
}

struct RandomSpecBounds {
  int max_players = 5;
  int max_arms = 3;
  int max_capacity = 2;
  bool require_cover = false;  // sum of capacities >= N
  bool require_etda = false;   // N <= K * C_min
  double gap_floor = 0.0;
  int64_t horizon = 1000;
};

inline MarketSpec RandomResponsiveSpec(std::mt19937_64& rng, const RandomSpecBounds& b) {
  std::uniform_int_distribution<int> n_dist(1, b.max_players);
  std::uniform_int_distribution<int> k_dist(1, b.max_arms);
  std::uniform_int_distribution<int> c_dist(1, b.max_capacity);
  std::uniform_int_distribution<int> mu_dist(1, 1000);
  while (true) {
    const int n = n_dist(rng);
    const int k = k_dist(rng);
    std::vector<int> caps(k);
    for (int& c : caps) c = c_dist(rng);
    const int total = std::accumulate(caps.begin(), caps.end(), 0);
    const int c_min = *std::min_element(caps.begin(), caps.end());
    if (b.require_cover && total < n) continue;
    if (b.require_etda && n > k * c_min) continue;
    std::vector<std::vector<double>> mu(n, std::vector<double>(k));
    bool ok = true;
    for (auto& row : mu) {
      std::set<int> used;
      for (double& v : row) {
        int x = mu_dist(rng);
        while (used.count(x)) x = mu_dist(rng);
        used.insert(x);
        v = x / 1000.0;
      }
      for (int a = 0; a < k; ++a) {
        for (int c = a + 1; c < k; ++c) {
          if (std::abs(row[a] - row[c]) < b.gap_floor) ok = false;
        }
      }
    }
    if (!ok) continue;
    std::vector<ChoiceFunction> arms;
    for (int j = 0; j < k; ++j) {
      std::vector<int> ranking(n);
      std::iota(ranking.begin(), ranking.end(), 0);
      std::shuffle(ranking.begin(), ranking.end(), rng);
      arms.push_back(ChoiceFunction::Responsive(ranking, caps[j]));
    }
    return MarketSpec(std::move(mu), std::move(arms), b.horizon);
  }
}

// Naive choice: sorted player lists instead of bitmasks.
inline std::vector<int> OracleChoose(const ChoiceFunction& ch, std::vector<int> offered) {
  std::sort(offered.begin(), offered.end());
  if (ch.is_responsive()) {
    std::vector<int> out;
    for (int p : ch.ranking()) {
      if (static_cast<int>(out.size()) == ch.capacity()) break;
      if (std::binary_search(offered.begin(), offered.end(), p)) out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  for (PlayerSet s : ch.ranked_subsets()) {
    std::vector<int> members;
    for (int p = 0; p < kMaxIndex; ++p) {
      if ((s.bits() >> p) & 1u) members.push_back(p);
    }
    if (std::includes(offered.begin(), offered.end(), members.begin(), members.end())) return members;
  }
  return {};
}

inline bool OracleIsStable(const std::vector<int>& assignment, const MarketSpec& spec) {
  const int n = spec.n_players();
  const int k = spec.n_arms();
  std::vector<std::vector<int>> at(k);
  for (int i = 0; i < n; ++i) {
    if (assignment[i] >= 0) at[assignment[i]].push_back(i);
  }
  for (int j = 0; j < k; ++j) {
    if (OracleChoose(spec.arm(j), at[j]) != at[j]) return false;
  }
  for (int i = 0; i < n; ++i) {
    const double current = assignment[i] >= 0 ? spec.mu(i, assignment[i]) : 0.0;
    for (int j = 0; j < k; ++j) {
      if (j == assignment[i] || spec.mu(i, j) <= current) continue;
      std::vector<int> offer = at[j];
      offer.push_back(i);
      const std::vector<int> chosen = OracleChoose(spec.arm(j), offer);
      if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) return false;
    }
  }
  return true;
}

// All stable assignments, by recursion over players.
inline std::vector<std::vector<int>> OracleStableMatchings(const MarketSpec& spec) {
  std::vector<std::vector<int>> out;
  std::vector<int> assignment(spec.n_players(), -1);
  auto recurse = [&](auto&& self, int i) -> void {
    if (i == spec.n_players()) {
      if (OracleIsStable(assignment, spec)) out.push_back(assignment);
      return;
    }
    for (int j = -1; j < spec.n_arms(); ++j) {
      assignment[i] = j;
      self(self, i + 1);
    }
  };
  recurse(recurse, 0);
  return out;
}

// Per player, the arm of highest (best = true) or lowest value over `all`.
inline std::vector<int> OracleExtremeArms(const MarketSpec& spec,
                                          const std::vector<std::vector<int>>& all, bool best) {
  std::vector<int> out(spec.n_players(), -1);
  for (int i = 0; i < spec.n_players(); ++i) {
    double chosen = best ? -1.0 : 2.0;
    for (const auto& m : all) {
      const double v = m[i] >= 0 ? spec.mu(i, m[i]) : 0.0;
      if (best ? v > chosen : v < chosen) {
        chosen = v;
        out[i] = m[i];
      }
    }
  }
  return out;
}

}  // namespace matchbandit::testing

#endif  // MATCHBANDIT_TESTS_TEST_UTIL_H_
