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

// Command-line front end: run, sweep, deviate, verify and generate.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "matchbandit/algorithm.h"
#include "matchbandit/deferred_acceptance.h"
#include "matchbandit/experiments.h"
#include "matchbandit/market.h"
#include "matchbandit/market_io.h"
#include "matchbandit/runner.h"

namespace fs = std::filesystem;
using namespace matchbandit;

namespace {

constexpr int kExitViolation = 2;

class Manifest {
 public:
  explicit Manifest(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void Write(const std::string& name, const std::string& contents) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    out << contents;
    files_.push_back(name);
  }

  void Finish(const std::string& command) {
    nlohmann::ordered_json doc;
    doc["command"] = command;
    doc["files"] = files_;
    std::ofstream out(dir_ / "manifest.json", std::ios::binary);
    out << doc.dump(2) << "\n";
  }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

AlgorithmKind ResolveAlgorithm(const std::string& algo, const std::string& mode) {
  if (algo == "aetda") {
    if (mode == "central") return AlgorithmKind::kAetdaCentral;
    if (mode == "decentral") return AlgorithmKind::kAetdaDecentral;
    throw SpecError("--mode must be central or decentral");
  }
  return ParseAlgorithmKind(algo);
}

std::vector<uint64_t> SeedRange(uint64_t first, int count) {
  std::vector<uint64_t> seeds(count);
  for (int s = 0; s < count; ++s) seeds[s] = first + static_cast<uint64_t>(s);
  return seeds;
}

struct GeneratorFlags {
  int players = 3;
  int arms = 3;
  int min_capacity = 1;
  int max_capacity = 1;
  std::string capacity_rule = "cover";
  double gap_floor = 0.1;
  int64_t horizon = 100000;
  std::string reward_model = "bernoulli";
  uint64_t seed = 1;

  void Register(CLI::App* app) {
    app->add_option("--players", players, "Number of players");
    app->add_option("--arms", arms, "Number of arms");
    app->add_option("--min-capacity", min_capacity, "Smallest arm capacity");
    app->add_option("--max-capacity", max_capacity, "Largest arm capacity");
    app->add_option("--capacity-rule", capacity_rule, "any | cover | etda")
        ->check(CLI::IsMember({"any", "cover", "etda"}));
    app->add_option("--gap-floor", gap_floor, "Minimum preference gap");
    app->add_option("--horizon", horizon, "Rounds per run");
    app->add_option("--reward-model", reward_model, "bernoulli | gaussian_unit_variance");
    app->add_option("--gen-seed", seed, "Generator seed");
  }

  GeneratorOptions Options() const {
    GeneratorOptions o;
    o.n_players = players;
    o.n_arms = arms;
    o.min_capacity = min_capacity;
    o.max_capacity = max_capacity;
    o.capacity_rule = capacity_rule == "any"    ? GeneratorOptions::CapacityRule::kAny
                      : capacity_rule == "etda" ? GeneratorOptions::CapacityRule::kEtdaPrecondition
                                                : GeneratorOptions::CapacityRule::kCoverPlayers;
    o.gap_floor = gap_floor;
    o.horizon = horizon;
    o.reward_model = ParseRewardModel(reward_model);
    return o;
  }
};

int CmdRun(const std::string& spec_path, const std::string& algo, const std::string& mode,
           const std::string& deviant, std::optional<uint64_t> seed, std::optional<int64_t> horizon,
           int curve_points, bool trace, const std::string& out_dir) {
  const MarketFile file = LoadMarketFile(spec_path);
  const MarketSpec spec = horizon ? file.spec.WithHorizon(*horizon) : file.spec;
  RunOptions options;
  options.algorithm = ResolveAlgorithm(algo, mode);
  if (!deviant.empty()) options.deviation = Deviation::Parse(deviant);
  options.record_rounds = trace;
  options.curve_points = curve_points;
  const RegretTargets targets = ComputeRegretTargets(spec);
  const RunResult result = RunExperiment(spec, seed.value_or(file.seed), options, targets);

  Manifest manifest(out_dir);
  const std::string summary = SummaryJson(spec, options, targets, result);
  if (trace) manifest.Write("trace.csv", TraceCsv(result));
  if (curve_points > 0) manifest.Write("curve.csv", CurveCsv(result));
  manifest.Write("summary.json", summary);
  manifest.Finish("run");
  std::cout << summary;

  bool violation = result.aborted;
  if (options.algorithm == AlgorithmKind::kOda && !options.deviation && result.rejections > 0) {
    std::cerr << "invariant violated: honest oda run had " << result.rejections << " rejections\n";
    violation = true;
  }
  if (result.aborted) std::cerr << "run aborted: " << result.diagnostic << "\n";
  return violation ? kExitViolation : 0;
}

int CmdSweep(const std::string& spec_path, GeneratorFlags gen, const std::string& axis,
             const std::vector<double>& values, const std::string& algo, const std::string& mode,
             const std::string& regret, uint64_t first_seed, int seeds, int threads,
             const std::string& out_dir) {
  std::optional<MarketSpec> base;
  if (!spec_path.empty()) base = LoadMarketFile(spec_path).spec;
  if ((axis == "T" || axis == "delta") && !base) {
    std::mt19937_64 rng(gen.seed);
    base = GenerateMarket(gen.Options(), rng);
  }
  std::function<MarketSpec(double)> make_spec;
  if (axis == "T") {
    make_spec = [&](double v) { return base->WithHorizon(static_cast<int64_t>(v)); };
  } else if (axis == "delta") {
    make_spec = [&](double v) { return LadderMarket(*base, v); };
  } else {
    make_spec = [&, axis](double v) {
      GeneratorFlags g = gen;
      (axis == "N" ? g.players : g.arms) = static_cast<int>(v);
      std::mt19937_64 rng(g.seed);
      return GenerateMarket(g.Options(), rng);
    };
  }
  RunOptions options;
  options.algorithm = ResolveAlgorithm(algo, mode);
  const std::vector<uint64_t> seed_list = SeedRange(first_seed, seeds);
  const SweepResult result =
      Sweep(axis, values, make_spec, options, seed_list,
            regret == "pessimal" ? RegretKind::kPessimal : RegretKind::kOptimal, threads);

  Manifest manifest(out_dir);
  const std::string csv = SweepCsv(result);
  manifest.Write("sweep.csv", csv);
  nlohmann::ordered_json fit;
  fit["axis"] = axis;
  fit["algorithm"] = ToString(options.algorithm);
  fit["regret"] = regret;
  fit["log_slope"] = result.log_fit.slope;
  fit["log_intercept"] = result.log_fit.intercept;
  fit["log_r_squared"] = result.log_fit.r_squared;
  manifest.Write("fit.json", fit.dump(2) + "\n");
  manifest.Finish("sweep");
  std::cout << csv << fit.dump(2) << "\n";
  return 0;
}

int CmdDeviate(const std::string& spec_path, const std::string& algo, const std::string& mode,
               const std::string& deviant, std::optional<int64_t> horizon, uint64_t first_seed,
               int seeds, int threads, const std::string& out_dir) {
  const MarketFile file = LoadMarketFile(spec_path);
  const MarketSpec spec = horizon ? file.spec.WithHorizon(*horizon) : file.spec;
  const DeviationReport report = RunDeviationReport(spec, ResolveAlgorithm(algo, mode),
                                                    Deviation::Parse(deviant),
                                                    SeedRange(first_seed, seeds), threads);
  Manifest manifest(out_dir);
  const std::string json = DeviationReportJson(report);
  manifest.Write("deviation.json", json);
  manifest.Finish("deviate");
  std::cout << json;
  return 0;
}

int CmdVerify(const std::string& spec_path, const std::string& out_dir) {
  const MarketSpec spec = LoadMarketFile(spec_path).spec;
  bool ok = true;
  nlohmann::ordered_json doc;
  auto arms = nlohmann::ordered_json::array();
  for (int j = 0; j < spec.n_arms(); ++j) {
    nlohmann::ordered_json entry;
    entry["arm"] = j;
    entry["kind"] = spec.arm(j).is_responsive() ? "responsive" : "general";
    if (spec.n_players() <= kMaxSubstitutabilityPlayers) {
      const auto audit = CheckSubstitutable(spec.arm(j), spec.n_players());
      entry["substitutable"] = audit.substitutable;
      if (audit.witness) {
        entry["witness"] = {{"offered", audit.witness->offered.Members()},
                            {"kept", audit.witness->kept},
                            {"removed", audit.witness->removed}};
        ok = false;
      }
    }
    arms.push_back(std::move(entry));
  }
  doc["arms"] = std::move(arms);
  doc["min_gap"] = MinGap(spec.mu()).min_gap();
  doc["aetda_precondition"] = spec.aetda_precondition();
  doc["etda_precondition"] = spec.etda_precondition();

  const DaTrace best = DaPlayerProposing(spec);
  const DaTrace worst = DaArmProposing(spec);
  doc["player_proposing"] = best.final.assignment();
  doc["player_proposing_stable"] = IsStable(best.final, spec);
  doc["arm_proposing"] = worst.final.assignment();
  doc["arm_proposing_stable"] = IsStable(worst.final, spec);
  ok = ok && IsStable(best.final, spec) && IsStable(worst.final, spec);
  if (spec.all_responsive()) {
    const int bound = std::min(spec.n_players() * spec.n_players(), spec.n_players() * spec.n_arms());
    doc["step_bound_ok"] = best.step_count <= bound;
    ok = ok && best.step_count <= bound;
  }
  if (spec.n_players() <= kMaxEnumerationPlayers && spec.n_arms() <= kMaxEnumerationArms) {
    try {
      const StableMatchingSet all = EnumerateStableMatchings(spec);
      doc["stable_matchings"] = all.matchings.size();
      const bool agree = all.best_arm == best.final.assignment() &&
                         all.worst_arm == worst.final.assignment();
      doc["referees_agree"] = agree;
      ok = ok && agree;
    } catch (const SpecError& e) {
      doc["enumeration_error"] = e.what();
      ok = false;
    }
  }
  doc["ok"] = ok;

  if (!out_dir.empty()) {
    Manifest manifest(out_dir);
    manifest.Write("verify.json", doc.dump(2) + "\n");
    manifest.Write("da_player_proposing.json", DaTraceToJson(best));
    manifest.Write("da_arm_proposing.json", DaTraceToJson(worst));
    manifest.Finish("verify");
  }
  std::cout << doc.dump(2) << "\n";
  return ok ? 0 : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandit learning in many-to-one matching markets"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string algo = "oda";
  std::string mode = "central";
  std::string deviant;
  std::string out_dir = "out";
  std::optional<uint64_t> seed;
  std::optional<int64_t> horizon;
  int curve_points = 100;
  bool trace = false;
  uint64_t first_seed = 1;
  int seeds = 30;
  int threads = 0;

  auto* run = app.add_subcommand("run", "Single seeded run of one algorithm");
  run->add_option("--spec", spec_path, "Market file")->required()->check(CLI::ExistingFile);
  run->add_option("--algo", algo, "etda | aetda | oda")->check(CLI::IsMember({"etda", "aetda", "oda"}));
  run->add_option("--mode", mode, "AETDA mode: central | decentral");
  run->add_option("--deviant", deviant, "<player>:<policy>");
  run->add_option("--seed", seed, "Override the file's seed");
  run->add_option("--horizon", horizon, "Override the file's horizon");
  run->add_option("--curve-points", curve_points, "Regret curve checkpoints (0 disables)");
  run->add_flag("--trace", trace, "Write the per-round CSV trace");
  run->add_option("--out", out_dir, "Output directory");

  GeneratorFlags gen;
  std::string axis = "T";
  std::vector<double> values;
  std::string regret = "optimal";
  auto* sweep = app.add_subcommand("sweep", "Seed-averaged regret along one axis");
  sweep->add_option("--spec", spec_path, "Base market file (T and delta axes)");
  sweep->add_option("--axis", axis, "T | delta | N | K")->check(CLI::IsMember({"T", "delta", "N", "K"}));
  sweep->add_option("--values", values, "Axis values")->required();
  sweep->add_option("--algo", algo, "etda | aetda | oda")->check(CLI::IsMember({"etda", "aetda", "oda"}));
  sweep->add_option("--mode", mode, "AETDA mode: central | decentral");
  sweep->add_option("--regret", regret, "optimal | pessimal")->check(CLI::IsMember({"optimal", "pessimal"}));
  sweep->add_option("--first-seed", first_seed, "First seed");
  sweep->add_option("--seeds", seeds, "Number of seeds per point");
  sweep->add_option("--threads", threads, "Worker threads (0 = all cores)");
  sweep->add_option("--out", out_dir, "Output directory");
  gen.Register(sweep);

  auto* deviate = app.add_subcommand("deviate", "Paired honest/deviant incentive runs");
  deviate->add_option("--spec", spec_path, "Market file")->required()->check(CLI::ExistingFile);
  deviate->add_option("--algo", algo, "etda | aetda | oda")->check(CLI::IsMember({"etda", "aetda", "oda"}));
  deviate->add_option("--mode", mode, "AETDA mode: central | decentral");
  deviate->add_option("--deviant", deviant, "<player>:<policy>")->required();
  deviate->add_option("--horizon", horizon, "Override the file's horizon");
  deviate->add_option("--first-seed", first_seed, "First seed");
  deviate->add_option("--seeds", seeds, "Number of paired seeds");
  deviate->add_option("--threads", threads, "Worker threads (0 = all cores)");
  deviate->add_option("--out", out_dir, "Output directory");

  std::string verify_out;
  auto* verify = app.add_subcommand("verify", "Offline oracle cross-checks and substitutability audit");
  verify->add_option("--spec", spec_path, "Market file")->required()->check(CLI::ExistingFile);
  verify->add_option("--out", verify_out, "Optional output directory");

  GeneratorFlags gen_only;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Write a random responsive market file");
  gen_only.Register(generate);
  generate->add_option("--output", gen_out, "Market file to write")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      return CmdRun(spec_path, algo, mode, deviant, seed, horizon, curve_points, trace, out_dir);
    }
    if (*sweep) {
      return CmdSweep(spec_path, gen, axis, values, algo, mode, regret, first_seed, seeds, threads,
                      out_dir);
    }
    if (*deviate) {
      return CmdDeviate(spec_path, algo, mode, deviant, horizon, first_seed, seeds, threads, out_dir);
    }
    if (*verify) return CmdVerify(spec_path, verify_out);
    if (*generate) {
      std::mt19937_64 rng(gen_only.seed);
      SaveMarketFile(gen_out, GenerateMarket(gen_only.Options(), rng), gen_only.seed);
      std::cout << gen_out << "\n";
      return 0;
    }
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
