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

#include "matchbandit/market_io.h"

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "test_util.h"

namespace matchbandit {
namespace {

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TEST(MarketIoTest, BundledFilesRoundTripByteExactly) {
  for (const char* name : {"example1.json", "two_by_two.json", "etda_counterexample.json"}) {
    const std::string text = ReadFile(testing::DataPath(name));
    const MarketFile file = ParseMarketFile(text);
    EXPECT_EQ(SerializeMarketFile(file.spec, file.seed), text) << name;
  }
}

TEST(MarketIoTest, Example1FileMatchesFixture) {
  const MarketFile file = LoadMarketFile(testing::DataPath("example1.json"));
  EXPECT_EQ(file.spec, testing::Example1Market());
  EXPECT_EQ(file.seed, 1u);
}

TEST(MarketIoTest, RandomSpecsRoundTrip) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const MarketSpec spec = testing::RandomResponsiveSpec(rng, {.max_players = 6, .max_arms = 4});
    const std::string text = SerializeMarketFile(spec, trial);
    const MarketFile back = ParseMarketFile(text);
    EXPECT_EQ(back.spec, spec);
    EXPECT_EQ(back.seed, static_cast<uint64_t>(trial));
    EXPECT_EQ(SerializeMarketFile(back.spec, back.seed), text);
  }
}

TEST(MarketIoTest, ValuesAreQuantizedToSixDecimals) {
  EXPECT_DOUBLE_EQ(QuantizeMu(0.1234564), 0.123456);
  EXPECT_DOUBLE_EQ(QuantizeMu(0.1234566), 0.123457);
  const MarketFile file = ParseMarketFile(R"({"players": 1, "arms": 2, "horizon": 5,
      "mu": [[0.30000000001, 0.2]], "choice": [{"capacity": 1, "ranking": [0]},
      {"capacity": 1, "ranking": [0]}]})");
  EXPECT_EQ(file.spec.mu(0, 0), 0.3);
  EXPECT_EQ(file.spec.reward_model(), RewardModel::kBernoulli);
}

TEST(MarketIoTest, RejectsUnknownKeysAndBadShapes) {
  EXPECT_THROW(ParseMarketFile(R"({"players": 1, "arms": 1, "horizon": 5, "mu": [[0.5]],
      "choice": [{"capacity": 1, "ranking": [0]}], "extra": 1})"),
               SpecError);
  EXPECT_THROW(ParseMarketFile(R"({"players": 1, "arms": 1, "horizon": 5, "mu": [[0.5]],
      "choice": [{"capacity": 1, "ranking": [0], "subsets": []}]})"),
               SpecError);
  EXPECT_THROW(ParseMarketFile(R"({"players": 2, "arms": 1, "horizon": 5, "mu": [[0.5]],
      "choice": [{"capacity": 1, "ranking": [0, 1]}]})"),
               SpecError);
  EXPECT_THROW(ParseMarketFile(R"({"players": 1, "arms": 1, "horizon": 5, "mu": [[0.5]],
      "choice": []})"),
               SpecError);
  EXPECT_THROW(ParseMarketFile(R"({"players": 1, "arms": 1, "mu": [[0.5]],
      "choice": [{"capacity": 1, "ranking": [0]}]})"),
               SpecError);
  EXPECT_THROW(ParseMarketFile("not json"), SpecError);
  EXPECT_THROW(ParseMarketFile(R"({"players": 1, "arms": 1, "horizon": 5, "mu": [[0.5]],
      "reward_model": "poisson", "choice": [{"capacity": 1, "ranking": [0]}]})"),
               SpecError);
}

TEST(MarketIoTest, GaussianModelNameRoundTrips) {
  const MarketSpec spec({{0.5}}, {ChoiceFunction::Responsive({0}, 1)}, 7,
                        RewardModel::kGaussianUnitVariance);
  const MarketFile back = ParseMarketFile(SerializeMarketFile(spec, 3));
  EXPECT_EQ(back.spec.reward_model(), RewardModel::kGaussianUnitVariance);
}

}  // namespace
}  // namespace matchbandit
