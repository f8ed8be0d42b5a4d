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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace matchbandit {
namespace {

using nlohmann::json;

void RequireKeys(const json& obj, const std::set<std::string>& allowed, std::string_view where) {
  if (!obj.is_object()) throw SpecError(std::string(where) + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) {
      throw SpecError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <typename T>
T Field(const json& obj, const char* key) {
  if (!obj.contains(key)) throw SpecError(std::string("missing key '") + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SpecError(std::string("bad value for '") + key + "': " + e.what());
  }
}

ChoiceFunction ParseChoice(const json& entry, int n_players) {
  if (entry.contains("subsets")) {
    RequireKeys(entry, {"subsets"}, "choice entry");
    std::vector<PlayerSet> subsets;
    for (const auto& members : Field<std::vector<std::vector<int>>>(entry, "subsets")) {
      PlayerSet s;
      for (int p : members) {
        if (p < 0 || p >= n_players) throw SpecError("choice subset references an unknown player");
        s.Insert(p);
      }
      subsets.push_back(s);
    }
    return ChoiceFunction::General(std::move(subsets));
  }
  RequireKeys(entry, {"capacity", "ranking"}, "choice entry");
  return ChoiceFunction::Responsive(Field<std::vector<int>>(entry, "ranking"),
                                    Field<int>(entry, "capacity"));
}

std::string FormatMu(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string JoinInts(const std::vector<int>& xs) {
  std::string out = "[";
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(xs[i]);
  }
  return out + "]";
}

}  // namespace

double QuantizeMu(double value) { return std::round(value * 1e6) / 1e6; }

MarketFile ParseMarketFile(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("market file is not valid JSON: ") + e.what());
  }
  RequireKeys(doc, {"players", "arms", "horizon", "reward_model", "seed", "mu", "choice"},
              "market file");
  const int n = Field<int>(doc, "players");
  const int k = Field<int>(doc, "arms");
  if (n < 1 || n > kMaxIndex || k < 1 || k > kMaxIndex) {
    throw SpecError("players and arms must be in [1, 64]");
  }
  auto mu = Field<std::vector<std::vector<double>>>(doc, "mu");
  if (static_cast<int>(mu.size()) != n) throw SpecError("mu must have one row per player");
  for (auto& row : mu) {
    for (double& v : row) v = QuantizeMu(v);
  }
  const json& choice = doc.contains("choice") ? doc.at("choice") : json();
  if (!choice.is_array() || static_cast<int>(choice.size()) != k) {
    throw SpecError("choice must list one entry per arm");
  }
  std::vector<ChoiceFunction> arms;
  for (const json& entry : choice) arms.push_back(ParseChoice(entry, n));

  const RewardModel model = doc.contains("reward_model")
                                ? ParseRewardModel(Field<std::string>(doc, "reward_model"))
                                : RewardModel::kBernoulli;
  const uint64_t seed = doc.contains("seed") ? Field<uint64_t>(doc, "seed") : 0;
  return MarketFile{MarketSpec(std::move(mu), std::move(arms), Field<int64_t>(doc, "horizon"), model),
                    seed};
}

std::string SerializeMarketFile(const MarketSpec& spec, uint64_t seed) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"players\": " << spec.n_players() << ",\n";
  out << "  \"arms\": " << spec.n_arms() << ",\n";
  out << "  \"horizon\": " << spec.horizon() << ",\n";
  out << "  \"reward_model\": \"" << ToString(spec.reward_model()) << "\",\n";
  out << "  \"seed\": " << seed << ",\n";
  out << "  \"mu\": [\n";
  for (int i = 0; i < spec.n_players(); ++i) {
    out << "    [";
    for (int j = 0; j < spec.n_arms(); ++j) {
      if (j > 0) out << ", ";
      out << FormatMu(spec.mu(i, j));
    }
    out << "]" << (i + 1 < spec.n_players() ? "," : "") << "\n";
  }
  out << "  ],\n";
  out << "  \"choice\": [\n";
  for (int j = 0; j < spec.n_arms(); ++j) {
    const ChoiceFunction& ch = spec.arm(j);
    out << "    ";
    if (ch.is_responsive()) {
      out << "{\"capacity\": " << ch.capacity() << ", \"ranking\": " << JoinInts(ch.ranking())
          << "}";
    } else {
      out << "{\"subsets\": [";
      for (size_t s = 0; s < ch.ranked_subsets().size(); ++s) {
        if (s > 0) out << ", ";
        out << JoinInts(ch.ranked_subsets()[s].Members());
      }
      out << "]}";
    }
    out << (j + 1 < spec.n_arms() ? "," : "") << "\n";
  }
  out << "  ]\n";
  out << "}\n";
  return out.str();
}

MarketFile LoadMarketFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot open market file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseMarketFile(buf.str());
}

void SaveMarketFile(const std::filesystem::path& path, const MarketSpec& spec, uint64_t seed) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SpecError("cannot write market file " + path.string());
  out << SerializeMarketFile(spec, seed);
}

}  // namespace matchbandit
