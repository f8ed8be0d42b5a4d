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

// Multi-run experiments: random market generation, seed-averaged sweeps and
// paired honest/deviant incentive comparisons.

#ifndef MATCHBANDIT_EXPERIMENTS_H_
#define MATCHBANDIT_EXPERIMENTS_H_

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "matchbandit/market.h"
#include "matchbandit/runner.h"

namespace matchbandit {

// Runs fn(0), ..., fn(count - 1) on up to `threads` workers (0 = hardware
// concurrency). fn must only write to its own slot of any shared output.
void ParallelFor(int64_t count, const std::function<void(int64_t)>& fn, int threads = 0);

struct GeneratorOptions {
  enum class CapacityRule {
    kAny,              // no constraint beyond capacity bounds
    kCoverPlayers,     // sum of capacities >= N
    kEtdaPrecondition  // N <= K * C_min
  };

  int n_players = 2;
  int n_arms = 2;
  int min_capacity = 1;
  int max_capacity = 1;
  CapacityRule capacity_rule = CapacityRule::kCoverPlayers;
  // Every player's preference values are at least this far apart.
  double gap_floor = 0.0;
  int64_t horizon = 10000;
  RewardModel reward_model = RewardModel::kBernoulli;
  int max_attempts = 100000;
};

// Uniform arm rankings, uniform capacities in [min, max] under the capacity
// rule, and uniform mu rows on the 6-decimal grid, rejection-sampled until
// the gap floor holds. Throws SpecError if the rules cannot be met.
MarketSpec GenerateMarket(const GeneratorOptions& options, std::mt19937_64& rng);

// Same rankings, capacities and per-player preference orders as `base`, with
// values 1, 1 - delta, 1 - 2 delta, ... down each player's order.
MarketSpec LadderMarket(const MarketSpec& base, double delta);

enum class RegretKind { kOptimal, kPessimal };

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit FitLine(std::span<const double> xs, std::span<const double> ys);

struct SweepRow {
  double axis_value = 0.0;
  int runs = 0;
  // Player-averaged cumulative pseudo-regret at the horizon, over seeds.
  double mean_regret = 0.0;
  double std_regret = 0.0;
  double ci_half_width = 0.0;  // 95%, normal approximation
  // Fraction of runs ending in their convergence streak with a stable matching.
  double convergence_rate = 0.0;
  double coverage_clean_rate = 0.0;
};

struct SweepResult {
  std::string axis;
  std::vector<SweepRow> rows;
  // mean_regret regressed on ln(axis_value).
  LinearFit log_fit;
};

SweepResult Sweep(const std::string& axis, std::span<const double> values,
                  const std::function<MarketSpec(double)>& make_spec, const RunOptions& options,
                  std::span<const uint64_t> seeds, RegretKind kind, int threads = 0);

std::string SweepCsv(const SweepResult& result);

struct DeviationPair {
  uint64_t seed = 0;
  int honest_arm = kNone;
  int deviant_arm = kNone;
  // Final-arm rank improvement of the deviant; positive means it ended on
  // an arm it strictly prefers.
  int rank_gain = 0;
  double expected_reward_delta = 0.0;
  double realized_reward_delta = 0.0;
  // Sum over the other players of the change in optimal pseudo-regret.
  double others_regret_delta = 0.0;
  double max_other_deviant_regret = 0.0;
  bool coverage_clean = false;  // both runs
};

struct DeviationReport {
  Deviation deviation;
  std::vector<DeviationPair> pairs;
  int clean_pairs = 0;
  // Clean pairs in which the deviant ended strictly better off.
  int violations = 0;
  double mean_rank_gain = 0.0;
  double mean_expected_reward_delta = 0.0;
  double mean_realized_reward_delta = 0.0;
  double mean_others_regret_delta = 0.0;
};

DeviationReport RunDeviationReport(const MarketSpec& spec, AlgorithmKind algorithm,
                                   const Deviation& deviation, std::span<const uint64_t> seeds,
                                   int threads = 0);

std::string DeviationReportJson(const DeviationReport& report);

}  // namespace matchbandit

#endif  // MATCHBANDIT_EXPERIMENTS_H_
