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

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "matchbandit/deferred_acceptance.h"
#include "matchbandit/environment.h"
#include "matchbandit/market_io.h"

namespace matchbandit {
namespace {

std::string FormatReal(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// UCB of the arm with the highest estimate among sampled arms.
double UcbOfEmpiricalBest(const LearnerStats& stats) {
  int best = kNone;
  for (int j = 0; j < stats.n_arms(); ++j) {
    if (stats.count(j) == 0) continue;
    if (best == kNone || stats.mean(j) > stats.mean(best)) best = j;
  }
  return best == kNone ? std::numeric_limits<double>::infinity() : stats.ucb(best);
}

std::vector<int64_t> Checkpoints(int64_t horizon, int points) {
  std::vector<int64_t> out;
  for (int c = 1; c <= points; ++c) {
    const int64_t r = std::max<int64_t>(1, horizon * c / points);
    if (out.empty() || out.back() != r) out.push_back(r);
  }
  return out;
}

}  // namespace

RegretTargets ComputeRegretTargets(const MarketSpec& spec) {
  RegretTargets targets;
  const DaTrace best = DaPlayerProposing(spec);
  const DaTrace worst = DaArmProposing(spec);
  targets.optimal = best.final.assignment();
  targets.pessimal = worst.final.assignment();
  targets.source = "deferred_acceptance";
  if (spec.n_players() <= kMaxEnumerationPlayers && spec.n_arms() <= kMaxEnumerationArms) {
    const StableMatchingSet all = EnumerateStableMatchings(spec);
    if (all.best_arm != targets.optimal || all.worst_arm != targets.pessimal) {
      throw SpecError("offline referees disagree: enumeration and deferred acceptance give "
                      "different optimal or pessimal arms");
    }
    targets.source = "enumeration";
    targets.cross_checked = true;
  }
  return targets;
}

RunResult RunExperiment(const MarketSpec& spec, uint64_t seed, const RunOptions& options) {
  return RunExperiment(spec, seed, options, ComputeRegretTargets(spec));
}

RunResult RunExperiment(const MarketSpec& spec, uint64_t seed, const RunOptions& options,
                        const RegretTargets& targets) {
  const int n = spec.n_players();
  const int k = spec.n_arms();
  const int64_t horizon = spec.horizon();
  auto algorithm = MakeAlgorithm(options.algorithm, spec, options.deviation);
  RewardSampler sampler(spec, seed);

  RunResult r;
  r.horizon = horizon;
  r.seed = seed;
  r.optimal_regret.assign(n, 0.0);
  r.pessimal_regret.assign(n, 0.0);
  r.realized_optimal_regret.assign(n, 0.0);
  r.realized_pessimal_regret.assign(n, 0.0);
  r.realized_reward.assign(n, 0.0);
  r.expected_reward.assign(n, 0.0);
  r.curve_rounds = Checkpoints(horizon, options.curve_points);
  size_t next_checkpoint = 0;

  std::vector<double> best_value(n);
  std::vector<double> worst_value(n);
  for (int i = 0; i < n; ++i) {
    best_value[i] = spec.value(i, targets.optimal[i]);
    worst_value[i] = spec.value(i, targets.pessimal[i]);
  }

  auto record_checkpoint = [&](int64_t t) {
    while (next_checkpoint < r.curve_rounds.size() && r.curve_rounds[next_checkpoint] == t) {
      r.optimal_curve.push_back(r.optimal_regret);
      r.pessimal_curve.push_back(r.pessimal_regret);
      ++next_checkpoint;
    }
  };

  Matching previous;
  int64_t streak_start = 1;
  for (int64_t t = 1; t <= horizon; ++t) {
    algorithm->events().ClearRound();
    RoundOutcome outcome;
    try {
      const std::vector<int> proposals = algorithm->Propose(t);
      outcome = PlayRound(spec, proposals, sampler);
      algorithm->Observe(t, outcome);
    } catch (const RunAborted& e) {
      r.aborted = true;
      r.diagnostic = e.what();
      // The remaining rounds count as unmatched for everybody.
      for (int64_t u = t; u <= horizon; ++u) {
        for (int i = 0; i < n; ++i) {
          r.optimal_regret[i] += best_value[i];
          r.pessimal_regret[i] += worst_value[i];
          r.realized_optimal_regret[i] += best_value[i];
          r.realized_pessimal_regret[i] += worst_value[i];
        }
        record_checkpoint(u);
      }
      previous = Matching::Empty(n, k);
      break;
    }
    r.rounds_played = t;

    for (int i = 0; i < n; ++i) {
      const int arm = outcome.matching.arm_of(i);
      const double v = spec.value(i, arm);
      const double x = outcome.rewards[i];
      r.optimal_regret[i] += best_value[i] - v;
      r.pessimal_regret[i] += worst_value[i] - v;
      r.realized_optimal_regret[i] += best_value[i] - x;
      r.realized_pessimal_regret[i] += worst_value[i] - x;
      r.realized_reward[i] += x;
      r.expected_reward[i] += v;
      if (outcome.proposals[i] != kNone && !outcome.accepted(i)) ++r.rejections;
      const LearnerStats& stats = algorithm->stats(i);
      for (int j = 0; j < k; ++j) {
        ++r.coverage_checks;
        if (!stats.Covers(j, spec.mu(i, j))) ++r.coverage_violations;
      }
    }

    if (t == 1 || !(outcome.matching == previous)) streak_start = t;
    previous = outcome.matching;

    if (options.record_rounds) {
      RoundRecord rec;
      rec.proposals = outcome.proposals;
      rec.matched = outcome.matching.assignment();
      rec.rewards = outcome.rewards;
      rec.ucb_opt.resize(n);
      rec.flags.resize(n);
      for (int i = 0; i < n; ++i) {
        rec.ucb_opt[i] = UcbOfEmpiricalBest(algorithm->stats(i));
        rec.flags[i] = algorithm->events().flags(i);
      }
      r.rounds.push_back(std::move(rec));
    }
    record_checkpoint(t);
    if (options.on_round) options.on_round(t, outcome, *algorithm);
  }

  r.final_matching = previous;
  r.final_stable = IsStable(previous, spec);
  r.convergence_round = (!r.aborted && r.final_stable) ? streak_start : -1;
  r.events = algorithm->events().totals();
  return r;
}

uint64_t Fnv1a(std::string_view data, uint64_t hash) {
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

uint64_t ConfigHash(const MarketSpec& spec, const RunOptions& options) {
  std::string blob = SerializeMarketFile(spec, 0);
  blob += ToString(options.algorithm);
  blob += '\n';
  blob += options.deviation ? options.deviation->ToString() : "none";
  blob += '\n';
  blob += std::to_string(options.curve_points);
  return Fnv1a(blob);
}

std::string TraceCsv(const RunResult& result) {
  std::string out = "round,player,proposed_arm,matched_arm,reward,ucb_opt,event_flags\n";
  for (size_t t = 0; t < result.rounds.size(); ++t) {
    const RoundRecord& rec = result.rounds[t];
    for (size_t i = 0; i < rec.proposals.size(); ++i) {
      out += std::to_string(t + 1);
      out += ',';
      out += std::to_string(i);
      out += ',';
      out += std::to_string(rec.proposals[i]);
      out += ',';
      out += std::to_string(rec.matched[i]);
      out += ',';
      out += FormatReal(rec.rewards[i]);
      out += ',';
      out += FormatReal(rec.ucb_opt[i]);
      out += ',';
      out += rec.flags[i];
      out += '\n';
    }
  }
  return out;
}

std::string CurveCsv(const RunResult& result) {
  const size_t n = result.optimal_regret.size();
  std::string out = "round";
  for (size_t i = 0; i < n; ++i) {
    out += ",optimal_p" + std::to_string(i) + ",pessimal_p" + std::to_string(i);
  }
  out += '\n';
  for (size_t c = 0; c < result.optimal_curve.size(); ++c) {
    out += std::to_string(result.curve_rounds[c]);
    for (size_t i = 0; i < n; ++i) {
      out += ',' + FormatReal(result.optimal_curve[c][i]);
      out += ',' + FormatReal(result.pessimal_curve[c][i]);
    }
    out += '\n';
  }
  return out;
}

std::string SummaryJson(const MarketSpec& spec, const RunOptions& options,
                        const RegretTargets& targets, const RunResult& result) {
  nlohmann::ordered_json doc;
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016" PRIx64, ConfigHash(spec, options));
  doc["config_hash"] = hash;
  doc["seed"] = result.seed;
  doc["algorithm"] = ToString(options.algorithm);
  doc["deviation"] = options.deviation ? options.deviation->ToString() : "none";
  doc["players"] = spec.n_players();
  doc["arms"] = spec.n_arms();
  doc["horizon"] = result.horizon;
  doc["rounds_played"] = result.rounds_played;
  doc["target_source"] = targets.source;
  doc["optimal_arms"] = targets.optimal;
  doc["pessimal_arms"] = targets.pessimal;
  doc["final_matching"] = result.final_matching.assignment();
  doc["final_stable"] = result.final_stable;
  doc["convergence_round"] = result.convergence_round;
  doc["coverage"] = result.coverage();
  doc["coverage_clean"] = result.coverage_clean();
  doc["optimal_regret"] = result.optimal_regret;
  doc["pessimal_regret"] = result.pessimal_regret;
  doc["realized_optimal_regret"] = result.realized_optimal_regret;
  doc["realized_pessimal_regret"] = result.realized_pessimal_regret;
  doc["rejections"] = result.rejections;
  nlohmann::ordered_json events = nlohmann::ordered_json::object();
  for (const auto& [kind, count] : result.events) events[kind] = count;
  doc["events"] = std::move(events);
  doc["aborted"] = result.aborted;
  if (result.aborted) doc["diagnostic"] = result.diagnostic;
  return doc.dump(2) + "\n";
}

}  // namespace matchbandit
