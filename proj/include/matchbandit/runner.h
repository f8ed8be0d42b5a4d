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

// Seeded single runs: the round loop, regret against offline referees,
// confidence coverage, convergence detection and the per-round trace.

#ifndef MATCHBANDIT_RUNNER_H_
#define MATCHBANDIT_RUNNER_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "matchbandit/algorithm.h"
#include "matchbandit/market.h"

namespace matchbandit {

// Each player's arm in the player-optimal and player-pessimal stable
// matchings (kNone when unmatched there).
struct RegretTargets {
  std::vector<int> optimal;
  std::vector<int> pessimal;
  // "enumeration" when brute force was feasible, else "deferred_acceptance".
  std::string source;
  // True when both referees ran and agreed.
  bool cross_checked = false;
};

// Brute force for N <= 8 and K <= 5, deferred acceptance otherwise; when
// both are feasible they must agree or SpecError is thrown.
RegretTargets ComputeRegretTargets(const MarketSpec& spec);

struct RunOptions {
  AlgorithmKind algorithm = AlgorithmKind::kEtda;
  std::optional<Deviation> deviation;
  // Keep every round for the CSV trace.
  bool record_rounds = false;
  // Number of evenly spaced checkpoints of the cumulative regret curves.
  int curve_points = 0;
  // Called after every round, once the algorithm has observed the outcome.
  std::function<void(int64_t, const RoundOutcome&, const MatchingAlgorithm&)> on_round;
};

struct RoundRecord {
  std::vector<int> proposals;
  std::vector<int> matched;
  std::vector<double> rewards;
  std::vector<double> ucb_opt;
  std::vector<std::string> flags;
};

struct RunResult {
  int64_t horizon = 0;
  uint64_t seed = 0;
  int64_t rounds_played = 0;

  Matching final_matching;
  bool final_stable = false;
  // First round of the final streak of identical matchings, provided that
  // matching is stable; -1 otherwise.
  int64_t convergence_round = -1;

  bool aborted = false;
  std::string diagnostic;

  // Triples (t, i, j) with mu inside [LCB, UCB] after round t.
  int64_t coverage_checks = 0;
  int64_t coverage_violations = 0;
  double coverage() const {
    return coverage_checks == 0 ? 1.0
                                : 1.0 - static_cast<double>(coverage_violations) /
                                            static_cast<double>(coverage_checks);
  }
  bool coverage_clean() const { return coverage_violations == 0; }

  // Per player, cumulative over the horizon. The pseudo variants use the
  // mean of the matched arm, the realized ones the sampled reward.
  std::vector<double> optimal_regret;
  std::vector<double> pessimal_regret;
  std::vector<double> realized_optimal_regret;
  std::vector<double> realized_pessimal_regret;
  std::vector<double> realized_reward;
  std::vector<double> expected_reward;

  int64_t rejections = 0;  // proposals turned away
  std::map<std::string, int64_t, std::less<>> events;

  // curve_rounds[c] is the round of checkpoint c; curves are [c][player].
  std::vector<int64_t> curve_rounds;
  std::vector<std::vector<double>> optimal_curve;
  std::vector<std::vector<double>> pessimal_curve;

  std::vector<RoundRecord> rounds;  // only with record_rounds
};

// Precondition failures throw SpecError before any round is played.
RunResult RunExperiment(const MarketSpec& spec, uint64_t seed, const RunOptions& options,
                        const RegretTargets& targets);
RunResult RunExperiment(const MarketSpec& spec, uint64_t seed, const RunOptions& options);

// 64-bit FNV-1a.
uint64_t Fnv1a(std::string_view data, uint64_t hash = 0xcbf29ce484222325ull);

// Hash of everything that determines a run besides the seed.
uint64_t ConfigHash(const MarketSpec& spec, const RunOptions& options);

// Columns: round, player, proposed_arm, matched_arm, reward, ucb_opt,
// event_flags. Arms are -1 for skip / unmatched.
std::string TraceCsv(const RunResult& result);

// Cumulative regret checkpoints: round, then one column per player and kind.
std::string CurveCsv(const RunResult& result);

std::string SummaryJson(const MarketSpec& spec, const RunOptions& options,
                        const RegretTargets& targets, const RunResult& result);

}  // namespace matchbandit

#endif  // MATCHBANDIT_RUNNER_H_
