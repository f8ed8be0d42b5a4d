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

// Market spec files. The on-disk form is a JSON document:
//
//   {
//     "players": 3,
//     "arms": 2,
//     "horizon": 100000,
//     "reward_model": "bernoulli",
//     "seed": 1,
//     "mu": [
//       [0.900000, 0.100000],
//       ...
//     ],
//     "choice": [
//       {"subsets": [[0, 1], [0, 2], [1, 2], [2], [1], [0]]},
//       {"capacity": 1, "ranking": [2, 0, 1]}
//     ]
//   }
//
// Players and arms are 0-based. mu values are fixed point with 6 decimals;
// loading rounds to that grid so SerializeMarketFile(ParseMarketFile(s)) == s
// for every canonical document s.

#ifndef MATCHBANDIT_MARKET_IO_H_
#define MATCHBANDIT_MARKET_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "matchbandit/market.h"

namespace matchbandit {

struct MarketFile {
  MarketSpec spec;
  uint64_t seed = 0;
};

// Rounds to the 6-decimal grid used by market files.
double QuantizeMu(double value);

MarketFile ParseMarketFile(std::string_view text);
std::string SerializeMarketFile(const MarketSpec& spec, uint64_t seed);

MarketFile LoadMarketFile(const std::filesystem::path& path);
void SaveMarketFile(const std::filesystem::path& path, const MarketSpec& spec, uint64_t seed);

}  // namespace matchbandit

#endif  // MATCHBANDIT_MARKET_IO_H_
