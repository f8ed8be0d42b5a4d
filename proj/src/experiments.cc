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

#include "matchbandit/experiments.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "json.hpp"
#include "matchbandit/market_io.h"

namespace matchbandit {

void ParallelFor(int64_t count, const std::function<void(int64_t)>& fn, int threads) {
  if (count <= 0) return;
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = static_cast<int>(std::clamp<int64_t>(workers, 1, count));
  if (workers == 1) {
    for (int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!failed.load()) {
        const int64_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// -- Generator ----------------------------------------------------------------

MarketSpec GenerateMarket(const GeneratorOptions& o, std::mt19937_64& rng) {
  using Rule = GeneratorOptions::CapacityRule;
  if (o.n_players < 1 || o.n_arms < 1 || o.min_capacity < 1 || o.max_capacity < o.min_capacity) {
    throw SpecError("generator: bad dimensions or capacity bounds");
  }
  if (o.gap_floor * (o.n_arms - 1) >= 1.0) {
    throw SpecError("generator: gap floor too large for the number of arms");
  }
  const int n = o.n_players;
  const int k = o.n_arms;
  if ((o.capacity_rule == Rule::kCoverPlayers && k * o.max_capacity < n) ||
      (o.capacity_rule == Rule::kEtdaPrecondition && k * o.max_capacity < n)) {
    throw SpecError("generator: capacity bounds cannot satisfy the capacity rule");
  }

  std::uniform_int_distribution<int> cap_dist(o.min_capacity, o.max_capacity);
  std::vector<int> capacities(k);
  for (int attempt = 0;; ++attempt) {
    if (attempt >= o.max_attempts) throw SpecError("generator: capacity rule not met");
    for (int& c : capacities) c = cap_dist(rng);
    const int total = std::accumulate(capacities.begin(), capacities.end(), 0);
    const int c_min = *std::min_element(capacities.begin(), capacities.end());
    if (o.capacity_rule == Rule::kCoverPlayers && total < n) continue;
    if (o.capacity_rule == Rule::kEtdaPrecondition && n > k * c_min) continue;
    break;
  }

  std::vector<ChoiceFunction> arms;
  for (int j = 0; j < k; ++j) {
    std::vector<int> ranking(n);
    std::iota(ranking.begin(), ranking.end(), 0);
    std::shuffle(ranking.begin(), ranking.end(), rng);
    arms.push_back(ChoiceFunction::Responsive(std::move(ranking), capacities[j]));
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<double>> mu(n, std::vector<double>(k));
  for (auto& row : mu) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= o.max_attempts) throw SpecError("generator: gap floor not met");
      for (double& v : row) v = QuantizeMu(1.0 - unit(rng));
      bool ok = true;
      for (int a = 0; a < k && ok; ++a) {
        if (row[a] <= 0.0) ok = false;
        for (int b = a + 1; b < k && ok; ++b) {
          const double gap = std::abs(row[a] - row[b]);
          if (gap == 0.0 || gap < o.gap_floor) ok = false;
        }
      }
      if (ok) break;
    }
  }
  return MarketSpec(std::move(mu), std::move(arms), o.horizon, o.reward_model);
}

MarketSpec LadderMarket(const MarketSpec& base, double delta) {
  if (!(delta > 0.0) || delta * (base.n_arms() - 1) >= 1.0) {
    throw SpecError("ladder gap must satisfy 0 < delta * (K - 1) < 1");
  }
  std::vector<std::vector<double>> mu(base.n_players(), std::vector<double>(base.n_arms()));
  for (int i = 0; i < base.n_players(); ++i) {
    for (int r = 0; r < base.n_arms(); ++r) {
      mu[i][base.preference_order(i)[r]] = QuantizeMu(1.0 - r * delta);
    }
  }
  return MarketSpec(std::move(mu), base.arms(), base.horizon(), base.reward_model());
}

// -- Sweeps -------------------------------------------------------------------

LinearFit FitLine(std::span<const double> xs, std::span<const double> ys) {
  LinearFit fit;
  const size_t m = std::min(xs.size(), ys.size());
  if (m < 2) return fit;
  double mx = 0.0;
  double my = 0.0;
  for (size_t i = 0; i < m; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

SweepResult Sweep(const std::string& axis, std::span<const double> values,
                  const std::function<MarketSpec(double)>& make_spec, const RunOptions& options,
                  std::span<const uint64_t> seeds, RegretKind kind, int threads) {
  std::vector<MarketSpec> specs;
  std::vector<RegretTargets> targets;
  for (double v : values) {
    specs.push_back(make_spec(v));
    targets.push_back(ComputeRegretTargets(specs.back()));
  }
  const int64_t per_value = static_cast<int64_t>(seeds.size());
  struct Outcome {
    double regret = 0.0;
    bool converged = false;
    bool clean = false;
  };
  std::vector<Outcome> outcomes(values.size() * seeds.size());
  RunOptions run_options = options;
  run_options.record_rounds = false;
  run_options.on_round = nullptr;
  ParallelFor(
      static_cast<int64_t>(outcomes.size()),
      [&](int64_t job) {
        const size_t v = static_cast<size_t>(job / per_value);
        const uint64_t seed = seeds[static_cast<size_t>(job % per_value)];
        const RunResult r = RunExperiment(specs[v], seed, run_options, targets[v]);
        const auto& regret = kind == RegretKind::kOptimal ? r.optimal_regret : r.pessimal_regret;
        Outcome& out = outcomes[static_cast<size_t>(job)];
        out.regret = std::accumulate(regret.begin(), regret.end(), 0.0) /
                     static_cast<double>(regret.size());
        out.converged = r.convergence_round > 0;
        out.clean = r.coverage_clean();
      },
      threads);

  SweepResult result;
  result.axis = axis;
  std::vector<double> log_x;
  std::vector<double> ys;
  for (size_t v = 0; v < values.size(); ++v) {
    SweepRow row;
    row.axis_value = values[v];
    row.runs = static_cast<int>(seeds.size());
    double sum = 0.0;
    double sum_sq = 0.0;
    int converged = 0;
    int clean = 0;
    for (size_t s = 0; s < seeds.size(); ++s) {
      const Outcome& o = outcomes[v * seeds.size() + s];
      sum += o.regret;
      sum_sq += o.regret * o.regret;
      converged += o.converged;
      clean += o.clean;
    }
    const double m = static_cast<double>(seeds.size());
    if (m > 0) {
      row.mean_regret = sum / m;
      const double var = m > 1 ? std::max(0.0, (sum_sq - m * row.mean_regret * row.mean_regret) / (m - 1)) : 0.0;
      row.std_regret = std::sqrt(var);
      row.ci_half_width = 1.96 * row.std_regret / std::sqrt(m);
      row.convergence_rate = converged / m;
      row.coverage_clean_rate = clean / m;
    }
    result.rows.push_back(row);
    if (values[v] > 0) {
      log_x.push_back(std::log(values[v]));
      ys.push_back(row.mean_regret);
    }
  }
  result.log_fit = FitLine(log_x, ys);
  return result;
}

std::string SweepCsv(const SweepResult& result) {
  std::string out = result.axis +
                    ",runs,mean_regret,std_regret,ci_half_width,convergence_rate,"
                    "coverage_clean_rate\n";
  char buf[256];
  for (const SweepRow& row : result.rows) {
    std::snprintf(buf, sizeof(buf), "%.6g,%d,%.6f,%.6f,%.6f,%.6f,%.6f\n", row.axis_value, row.runs,
                  row.mean_regret, row.std_regret, row.ci_half_width, row.convergence_rate,
                  row.coverage_clean_rate);
    out += buf;
  }
  return out;
}

// -- Deviation ----------------------------------------------------------------

DeviationReport RunDeviationReport(const MarketSpec& spec, AlgorithmKind algorithm,
                                   const Deviation& deviation, std::span<const uint64_t> seeds,
                                   int threads) {
  const RegretTargets targets = ComputeRegretTargets(spec);
  const int d = deviation.player;
  RunOptions honest;
  honest.algorithm = algorithm;
  RunOptions deviant = honest;
  deviant.deviation = deviation;
  MakeAlgorithm(algorithm, spec, deviation);  // validates the policy up front

  DeviationReport report;
  report.deviation = deviation;
  report.pairs.resize(seeds.size());
  ParallelFor(
      static_cast<int64_t>(seeds.size()),
      [&](int64_t s) {
        const uint64_t seed = seeds[static_cast<size_t>(s)];
        const RunResult h = RunExperiment(spec, seed, honest, targets);
        const RunResult v = RunExperiment(spec, seed, deviant, targets);
        DeviationPair& p = report.pairs[static_cast<size_t>(s)];
        p.seed = seed;
        p.honest_arm = h.final_matching.arm_of(d);
        p.deviant_arm = v.final_matching.arm_of(d);
        p.rank_gain = spec.rank(d, p.honest_arm) - spec.rank(d, p.deviant_arm);
        p.expected_reward_delta = v.expected_reward[d] - h.expected_reward[d];
        p.realized_reward_delta = v.realized_reward[d] - h.realized_reward[d];
        for (int i = 0; i < spec.n_players(); ++i) {
          if (i == d) continue;
          p.others_regret_delta += v.optimal_regret[i] - h.optimal_regret[i];
          p.max_other_deviant_regret = std::max(p.max_other_deviant_regret, v.optimal_regret[i]);
        }
        p.coverage_clean = h.coverage_clean() && v.coverage_clean();
      },
      threads);

  const double m = seeds.empty() ? 1.0 : static_cast<double>(seeds.size());
  for (const DeviationPair& p : report.pairs) {
    if (p.coverage_clean) {
      ++report.clean_pairs;
      if (p.rank_gain > 0) ++report.violations;
    }
    report.mean_rank_gain += p.rank_gain / m;
    report.mean_expected_reward_delta += p.expected_reward_delta / m;
    report.mean_realized_reward_delta += p.realized_reward_delta / m;
    report.mean_others_regret_delta += p.others_regret_delta / m;
  }
  return report;
}

std::string DeviationReportJson(const DeviationReport& report) {
  nlohmann::ordered_json doc;
  doc["deviation"] = report.deviation.ToString();
  doc["pairs"] = report.pairs.size();
  doc["clean_pairs"] = report.clean_pairs;
  doc["violations"] = report.violations;
  doc["mean_rank_gain"] = report.mean_rank_gain;
  doc["mean_expected_reward_delta"] = report.mean_expected_reward_delta;
  doc["mean_realized_reward_delta"] = report.mean_realized_reward_delta;
  doc["mean_others_regret_delta"] = report.mean_others_regret_delta;
  auto rows = nlohmann::ordered_json::array();
  for (const DeviationPair& p : report.pairs) {
    nlohmann::ordered_json row;
    row["seed"] = p.seed;
    row["honest_arm"] = p.honest_arm;
    row["deviant_arm"] = p.deviant_arm;
    row["rank_gain"] = p.rank_gain;
    row["expected_reward_delta"] = p.expected_reward_delta;
    row["realized_reward_delta"] = p.realized_reward_delta;
    row["others_regret_delta"] = p.others_regret_delta;
    row["coverage_clean"] = p.coverage_clean;
    rows.push_back(std::move(row));
  }
  doc["runs"] = std::move(rows);
  return doc.dump(2) + "\n";
}

}  // namespace matchbandit
