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

#include "matchbandit/runner.h"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "json.hpp"
#include "matchbandit/deferred_acceptance.h"
#include "test_util.h"

namespace matchbandit {
namespace {

RunOptions Options(AlgorithmKind kind) {
  RunOptions options;
  options.algorithm = kind;
  return options;
}

TEST(RegretTargetsTest, EnumerationAndDeferredAcceptanceAgree) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 200; ++trial) {
    const MarketSpec spec = testing::RandomResponsiveSpec(rng, {.max_players = 5, .max_arms = 4});
    const RegretTargets t = ComputeRegretTargets(spec);
    EXPECT_EQ(t.source, "enumeration");
    EXPECT_TRUE(t.cross_checked);
    const auto all = testing::OracleStableMatchings(spec);
    EXPECT_EQ(t.optimal, testing::OracleExtremeArms(spec, all, true));
    EXPECT_EQ(t.pessimal, testing::OracleExtremeArms(spec, all, false));
  }
}

TEST(RegretTargetsTest, LargeMarketsUseDeferredAcceptance) {
  std::vector<std::vector<double>> mu(9, std::vector<double>(2));
  for (int i = 0; i < 9; ++i) {
    mu[i] = {0.5 + 0.05 * i, 0.1 + 0.01 * i};
  }
  std::vector<int> ranking = {0, 1, 2, 3, 4, 5, 6, 7, 8};
  const MarketSpec spec(mu, {ChoiceFunction::Responsive(ranking, 4), ChoiceFunction::Responsive(ranking, 4)},
                        10);
  const RegretTargets t = ComputeRegretTargets(spec);
  EXPECT_EQ(t.source, "deferred_acceptance");
  EXPECT_FALSE(t.cross_checked);
  EXPECT_EQ(t.optimal, std::vector<int>({0, 0, 0, 0, 1, 1, 1, 1, kNone}));
}

TEST(RunnerTest, SingleCertainArmHasZeroRegret) {
  const MarketSpec spec = testing::SingleMarket(1.0, 500);
  for (AlgorithmKind kind : {AlgorithmKind::kEtda, AlgorithmKind::kAetdaCentral, AlgorithmKind::kAetdaDecentral,
                             AlgorithmKind::kOda}) {
    const RunResult r = RunExperiment(spec, 1, Options(kind));
    EXPECT_EQ(r.rounds_played, 500);
    EXPECT_DOUBLE_EQ(r.optimal_regret[0], 0.0) << ToString(kind);
    EXPECT_DOUBLE_EQ(r.realized_optimal_regret[0], 0.0) << ToString(kind);
    EXPECT_DOUBLE_EQ(r.realized_reward[0], 500.0);
    EXPECT_EQ(r.convergence_round, 1);
    EXPECT_TRUE(r.final_stable);
  }
}

TEST(RunnerTest, PermanentlyRejectedPlayerAccruesFullRegret) {
  // p0 probes arm 1 every round, which only ever takes p2.
  const MarketSpec spec = testing::Example1Market(2000);
  RunOptions options = Options(AlgorithmKind::kOda);
  options.deviation = Deviation::Parse("0:probe:1");
  const RunResult r = RunExperiment(spec, 4, options);
  const RegretTargets t = ComputeRegretTargets(spec);
  EXPECT_NEAR(r.optimal_regret[0], 2000 * spec.value(0, t.optimal[0]), 1e-6);
  EXPECT_DOUBLE_EQ(r.expected_reward[0], 0.0);
  EXPECT_DOUBLE_EQ(r.realized_reward[0], 0.0);
}

TEST(RunnerTest, RegretIdentityHolds) {
  const MarketSpec spec = testing::TwoByTwoMarket(5000);
  const RegretTargets t = ComputeRegretTargets(spec);
  const RunResult r = RunExperiment(spec, 3, Options(AlgorithmKind::kAetdaCentral));
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(r.optimal_regret[i] + r.expected_reward[i], 5000 * spec.value(i, t.optimal[i]), 1e-6);
    EXPECT_NEAR(r.realized_optimal_regret[i] + r.realized_reward[i], 5000 * spec.value(i, t.optimal[i]),
                1e-6);
    EXPECT_NEAR(r.optimal_regret[i] - r.pessimal_regret[i],
                5000 * (spec.value(i, t.optimal[i]) - spec.value(i, t.pessimal[i])), 1e-6);
  }
}

TEST(RunnerTest, ConvergenceRoundStartsTheFinalStreak) {
  const MarketSpec spec = testing::TwoByTwoMarket(20000);
  RunOptions options = Options(AlgorithmKind::kAetdaCentral);
  options.record_rounds = true;
  const RunResult r = RunExperiment(spec, 5, options);
  ASSERT_GT(r.convergence_round, 1);
  const auto& last = r.rounds.back().matched;
  for (int64_t t = r.convergence_round; t <= r.horizon; ++t) EXPECT_EQ(r.rounds[t - 1].matched, last);
  EXPECT_NE(r.rounds[r.convergence_round - 2].matched, last);
}

TEST(RunnerTest, UnstableFinalMatchingHasNoConvergenceRound) {
  const MarketSpec spec = testing::TwoByTwoMarket(200);
  RunOptions options = Options(AlgorithmKind::kEtda);
  options.deviation = Deviation::Parse("0:never_resolve");
  const RunResult r = RunExperiment(spec, 1, options);
  if (!r.final_stable) EXPECT_EQ(r.convergence_round, -1);
  EXPECT_EQ(r.final_stable, IsStable(r.final_matching, spec));
}

TEST(RunnerTest, TracesAreByteIdenticalAcrossRuns) {
  for (AlgorithmKind kind : {AlgorithmKind::kEtda, AlgorithmKind::kAetdaCentral, AlgorithmKind::kOda}) {
    const MarketSpec spec = kind == AlgorithmKind::kOda ? testing::Example1Market(3000)
                                                        : testing::TwoByTwoMarket(3000);
    RunOptions options = Options(kind);
    options.record_rounds = true;
    options.curve_points = 10;
    const RunResult a = RunExperiment(spec, 17, options);
    const RunResult b = RunExperiment(spec, 17, options);
    EXPECT_EQ(TraceCsv(a), TraceCsv(b));
    EXPECT_EQ(CurveCsv(a), CurveCsv(b));
    const RegretTargets t = ComputeRegretTargets(spec);
    EXPECT_EQ(SummaryJson(spec, options, t, a), SummaryJson(spec, options, t, b));
    const RunResult c = RunExperiment(spec, 18, options);
    EXPECT_NE(TraceCsv(a), TraceCsv(c));
  }
}

TEST(RunnerTest, TraceLayout) {
  const MarketSpec spec = testing::TwoByTwoMarket(3);
  RunOptions options = Options(AlgorithmKind::kEtda);
  options.record_rounds = true;
  const std::string csv = TraceCsv(RunExperiment(spec, 1, options));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "round,player,proposed_arm,matched_arm,reward,ucb_opt,event_flags");
  // Round 1: both players propose to arm 0, which takes p0.
  std::getline(in, line);
  EXPECT_EQ(line.rfind("1,0,0,0,", 0), 0u) << line;
  EXPECT_NE(line.find("index:1"), std::string::npos) << line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("1,1,0,-1,0.000000,inf,", 0), 0u) << line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(RunnerTest, CurveCheckpointsEndAtTheHorizon) {
  const MarketSpec spec = testing::TwoByTwoMarket(1000);
  RunOptions options = Options(AlgorithmKind::kAetdaCentral);
  options.curve_points = 4;
  const RunResult r = RunExperiment(spec, 1, options);
  EXPECT_EQ(r.curve_rounds, std::vector<int64_t>({250, 500, 750, 1000}));
  ASSERT_EQ(r.optimal_curve.size(), 4u);
  EXPECT_EQ(r.optimal_curve.back(), r.optimal_regret);
  EXPECT_EQ(r.pessimal_curve.back(), r.pessimal_regret);
}

TEST(RunnerTest, SummaryRecordsSeedAndConfig) {
  const MarketSpec spec = testing::TwoByTwoMarket(100);
  RunOptions options = Options(AlgorithmKind::kEtda);
  const RegretTargets t = ComputeRegretTargets(spec);
  const auto doc = nlohmann::json::parse(SummaryJson(spec, options, t, RunExperiment(spec, 42, options)));
  EXPECT_EQ(doc["seed"], 42);
  EXPECT_EQ(doc["algorithm"], "etda");
  EXPECT_EQ(doc["target_source"], "enumeration");
  EXPECT_EQ(doc["config_hash"].get<std::string>().size(), 16u);
  RunOptions other = options;
  other.algorithm = AlgorithmKind::kAetdaCentral;
  EXPECT_NE(ConfigHash(spec, options), ConfigHash(spec, other));
  EXPECT_EQ(ConfigHash(spec, options), ConfigHash(spec, options));
  EXPECT_NE(ConfigHash(spec, options), ConfigHash(spec.WithHorizon(101), options));
}

TEST(RunnerTest, Fnv1aKnownValues) {
  EXPECT_EQ(Fnv1a(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(Fnv1a("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(Fnv1a("foobar"), 0x85944171f73967e8ull);
}

TEST(RunnerTest, PreconditionFailuresThrowBeforePlaying) {
  EXPECT_THROW(RunExperiment(testing::Example1Market(), 1, Options(AlgorithmKind::kEtda)), SpecError);
}

TEST(RunnerTest, CoverageCountsEveryTriple) {
  const MarketSpec spec = testing::TwoByTwoMarket(300);
  const RunResult r = RunExperiment(spec, 1, Options(AlgorithmKind::kAetdaCentral));
  EXPECT_EQ(r.coverage_checks, 300 * 2 * 2);
  EXPECT_LE(r.coverage(), 1.0);
}

}  // namespace
}  // namespace matchbandit
