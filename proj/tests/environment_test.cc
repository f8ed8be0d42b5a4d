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

#include <gtest/gtest.h>

#include <random>

#include "matchbandit/learner_stats.h"
#include "test_util.h"

namespace matchbandit {
namespace {

TEST(ResolveRoundTest, CapacityOneKeepsTheHigherRanked) {
  const MarketSpec spec({{0.9}, {0.8}}, {ChoiceFunction::Responsive({1, 0}, 1)}, 10);
  const RoundOutcome out = ResolveRound(spec, std::vector<int>{0, 0});
  EXPECT_EQ(out.matching.players_at(0), PlayerSet::Of({1}));
  EXPECT_FALSE(out.accepted(0));
  EXPECT_TRUE(out.accepted(1));
  EXPECT_EQ(out.rewards, std::vector<double>({0.0, 0.0}));
}

TEST(ResolveRoundTest, AllSkipLeavesArmsEmpty) {
  const MarketSpec spec = testing::TwoByTwoMarket();
  const RoundOutcome out = ResolveRound(spec, std::vector<int>{kNone, kNone});
  EXPECT_TRUE(out.matching.players_at(0).empty());
  EXPECT_TRUE(out.matching.players_at(1).empty());
  EXPECT_FALSE(out.accepted(0));
}

TEST(ResolveRoundTest, Example1EveryoneAtFirstArm) {
  const RoundOutcome out = ResolveRound(testing::Example1Market(), std::vector<int>{0, 0, 0});
  EXPECT_EQ(out.matching.players_at(0), PlayerSet::Of({0, 1}));
  EXPECT_FALSE(out.accepted(2));
}

TEST(ResolveRoundTest, RejectsUnknownArm) {
  EXPECT_THROW(ResolveRound(testing::TwoByTwoMarket(), std::vector<int>{2, 0}), SpecError);
  EXPECT_THROW(ResolveRound(testing::TwoByTwoMarket(), std::vector<int>{-2, 0}), SpecError);
  EXPECT_THROW(ResolveRound(testing::TwoByTwoMarket(), std::vector<int>{0}), SpecError);
}

TEST(ResolveRoundTest, AcceptedSetsAreExactlyTheChoiceOfProposers) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const MarketSpec spec = testing::RandomResponsiveSpec(rng, {.max_players = 6, .max_arms = 3});
    std::vector<int> proposals(spec.n_players());
    for (int& p : proposals) p = std::uniform_int_distribution<int>(-1, spec.n_arms() - 1)(rng);
    RewardSampler sampler(spec, trial);
    const RoundOutcome out = PlayRound(spec, proposals, sampler);
    for (int j = 0; j < spec.n_arms(); ++j) {
      std::vector<int> proposers;
      for (int i = 0; i < spec.n_players(); ++i) {
        if (proposals[i] == j) proposers.push_back(i);
      }
      EXPECT_EQ(out.matching.players_at(j).Members(), testing::OracleChoose(spec.arm(j), proposers));
    }
    for (int i = 0; i < spec.n_players(); ++i) {
      if (!out.accepted(i)) EXPECT_EQ(out.rewards[i], 0.0);
    }
  }
}

TEST(RewardSamplerTest, BernoulliWithMeanOneAlwaysPays) {
  RewardSampler sampler(testing::SingleMarket(1.0), 5);
  for (int t = 0; t < 1000; ++t) ASSERT_EQ(sampler.Sample(0, 0), 1.0);
}

TEST(RewardSamplerTest, GaussianIsReproducibleUnderASeed) {
  const MarketSpec spec({{0.5}}, {ChoiceFunction::Responsive({0}, 1)}, 10,
                        RewardModel::kGaussianUnitVariance);
  RewardSampler a(spec, 42);
  RewardSampler b(spec, 42);
  RewardSampler c(spec, 43);
  const double first = a.Sample(0, 0);
  EXPECT_EQ(first, b.Sample(0, 0));
  EXPECT_NE(first, c.Sample(0, 0));
}

TEST(RewardSamplerTest, BernoulliMeanConverges) {
  RewardSampler sampler(testing::SingleMarket(0.7), 8);
  double sum = 0.0;
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) sum += sampler.Sample(0, 0);
  EXPECT_NEAR(sum / draws, 0.7, 0.01);
}

TEST(RewardSamplerTest, GaussianMomentsMatchUnitVariance) {
  const MarketSpec spec({{0.3}}, {ChoiceFunction::Responsive({0}, 1)}, 10,
                        RewardModel::kGaussianUnitVariance);
  RewardSampler sampler(spec, 8);
  double sum = 0.0;
  double sum_sq = 0.0;
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) {
    const double x = sampler.Sample(0, 0);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / draws;
  EXPECT_NEAR(mean, 0.3, 0.02);
  EXPECT_NEAR(sum_sq / draws - mean * mean, 1.0, 0.03);
}

TEST(RewardSamplerTest, StreamsAreIndependentOfDrawOrder) {
  const MarketSpec spec = testing::TwoByTwoMarket();
  RewardSampler a(spec, 77);
  RewardSampler b(spec, 77);
  std::vector<double> direct;
  for (int t = 0; t < 50; ++t) direct.push_back(a.Sample(1, 1));
  for (int t = 0; t < 50; ++t) {
    b.Sample(0, 0);
    b.Sample(0, 1);
    ASSERT_EQ(b.Sample(1, 1), direct[t]);
  }
}

// -- LearnerStats -------------------------------------------------------------

TEST(LearnerStatsTest, RunningMeanUpdates) {
  LearnerStats s(1, 100);
  EXPECT_EQ(s.count(0), 0);
  s.Update(0, 0.4);
  EXPECT_EQ(s.count(0), 1);
  EXPECT_DOUBLE_EQ(s.mean(0), 0.4);
  s.Update(0, 0.8);
  EXPECT_EQ(s.count(0), 2);
  EXPECT_DOUBLE_EQ(s.mean(0), 0.6);
}

TEST(LearnerStatsTest, RunningMeanFixedPoint) {
  LearnerStats s(1, 100);
  for (int t = 0; t < 3; ++t) s.Update(0, 0.5);
  s.Update(0, 0.5);
  EXPECT_EQ(s.count(0), 4);
  EXPECT_DOUBLE_EQ(s.mean(0), 0.5);
}

TEST(LearnerStatsTest, UnsampledArmsHaveInfiniteBounds) {
  LearnerStats s(2, 100);
  EXPECT_EQ(s.ucb(0), std::numeric_limits<double>::infinity());
  EXPECT_EQ(s.lcb(0), -std::numeric_limits<double>::infinity());
  EXPECT_TRUE(s.Covers(0, 0.123));
}

TEST(LearnerStatsTest, RadiusUsesNaturalLogOfHorizon) {
  LearnerStats s(1, 1000);
  s.Update(0, 1.0);
  s.Update(0, 0.0);
  const double radius = std::sqrt(6.0 * std::log(1000.0) / 2.0);
  EXPECT_DOUBLE_EQ(s.radius(0), radius);
  EXPECT_DOUBLE_EQ(s.ucb(0), 0.5 + radius);
  EXPECT_DOUBLE_EQ(s.lcb(0), 0.5 - radius);
}

TEST(LearnerStatsTest, IntervalShrinksLikeInverseRootCount) {
  LearnerStats s(1, 10000);
  std::mt19937_64 rng(1);
  std::bernoulli_distribution coin(0.3);
  double previous_width = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= 400; ++n) {
    s.Update(0, coin(rng) ? 1.0 : 0.0);
    const double width = s.ucb(0) - s.lcb(0);
    ASSERT_LE(s.lcb(0), s.ucb(0));
    ASSERT_LT(width, previous_width);
    ASSERT_NEAR(width * std::sqrt(static_cast<double>(n)), 2.0 * std::sqrt(6.0 * std::log(10000.0)),
                1e-9);
    previous_width = width;
  }
}

TEST(LearnerStatsTest, DeterministicRewardsAreAlwaysCovered) {
  LearnerStats s(1, 10000);
  RewardSampler sampler(testing::SingleMarket(1.0, 10000), 3);
  for (int t = 0; t < 10000; ++t) {
    s.Update(0, sampler.Sample(0, 0));
    ASSERT_TRUE(s.Covers(0, 1.0));
  }
}

TEST(LearnerStatsTest, MonteCarloCoverageOfASinglePair) {
  // 100 seeded runs of T = 10^4 uniform sampling. The per-check failure
  // probability is at most 2 T^-12, so a violation in any run would be a bug.
  const int64_t horizon = 10000;
  int runs_with_violation = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    LearnerStats s(1, horizon);
    RewardSampler sampler(testing::SingleMarket(0.5, horizon), seed);
    bool violated = false;
    for (int64_t t = 0; t < horizon && !violated; ++t) {
      s.Update(0, sampler.Sample(0, 0));
      violated = !s.Covers(0, 0.5);
    }
    runs_with_violation += violated;
  }
  EXPECT_LE(runs_with_violation / 100.0, 2.0 / horizon);
}

}  // namespace
}  // namespace matchbandit
