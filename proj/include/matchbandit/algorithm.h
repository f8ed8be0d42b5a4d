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

// Common interface of the online matching algorithms, the deviation policies
// used by the incentive experiments, and the algorithm factory.

#ifndef MATCHBANDIT_ALGORITHM_H_
#define MATCHBANDIT_ALGORITHM_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "matchbandit/environment.h"
#include "matchbandit/learner_stats.h"
#include "matchbandit/market.h"

namespace matchbandit {

enum class AlgorithmKind { kEtda, kAetdaCentral, kAetdaDecentral, kOda };

std::string_view ToString(AlgorithmKind kind);
AlgorithmKind ParseAlgorithmKind(std::string_view name);

// How a single deviant player departs from the protocol.
struct DeviationPolicy {
  enum class Kind {
    kHonest,
    kAlwaysMinusOne,  // AETDA: always reports opt = -1
    kWrongArm,        // AETDA: always reports opt = arm
    kNeverResolve,    // ETDA: never signals a resolved ranking
    kProbe,           // ODA: proposes `arm` when outside its plausible set, every `period` rounds
  };

  Kind kind = Kind::kHonest;
  int arm = kNone;
  int period = 1;

  // "honest", "always_minus_one", "wrong_arm:2", "never_resolve", "probe:1",
  // "probe:1:10".
  static DeviationPolicy Parse(std::string_view text);
  std::string ToString() const;
  bool operator==(const DeviationPolicy&) const = default;
};

struct Deviation {
  int player = kNone;
  DeviationPolicy policy;

  // "<player>:<policy>", e.g. "0:wrong_arm:2".
  static Deviation Parse(std::string_view text);
  std::string ToString() const;
  bool operator==(const Deviation&) const = default;
};

// Raised from inside a run when the protocol reaches a state it cannot
// continue from. The runner records the diagnostic and ends the run.
class RunAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per-round, per-player event flags plus run-wide totals keyed by kind.
class EventLog {
 public:
  explicit EventLog(int n_players) : flags_(n_players) {}

  void Add(int player, std::string_view kind, std::string_view detail = {});
  void ClearRound();

  // "kind[:detail]" entries joined by '|'.
  const std::string& flags(int player) const { return flags_[player]; }
  int64_t total(std::string_view kind) const;
  const std::map<std::string, int64_t, std::less<>>& totals() const { return totals_; }

 private:
  std::vector<std::string> flags_;
  std::map<std::string, int64_t, std::less<>> totals_;
};

class MatchingAlgorithm {
 public:
  explicit MatchingAlgorithm(const MarketSpec& spec) : spec_(spec), events_(spec.n_players()) {}
  virtual ~MatchingAlgorithm() = default;

  MatchingAlgorithm(const MatchingAlgorithm&) = delete;
  MatchingAlgorithm& operator=(const MatchingAlgorithm&) = delete;

  // Rounds are numbered from 1. Propose(t) is followed by Observe(t, ...)
  // with the outcome of exactly those proposals.
  virtual std::vector<int> Propose(int64_t t) = 0;
  virtual void Observe(int64_t t, const RoundOutcome& outcome) = 0;
  virtual const LearnerStats& stats(int player) const = 0;

  const MarketSpec& spec() const { return spec_; }
  EventLog& events() { return events_; }
  const EventLog& events() const { return events_; }

 protected:
  const MarketSpec& spec_;
  EventLog events_;
};

// Throws SpecError if the market violates what the algorithm needs:
// N <= K * C_min for ETDA, N <= C for AETDA, substitutable arms for ODA.
void CheckPreconditions(AlgorithmKind kind, const MarketSpec& spec);

// Also rejects deviation policies that do not apply to the algorithm. The
// spec must outlive the returned object.
std::unique_ptr<MatchingAlgorithm> MakeAlgorithm(AlgorithmKind kind, const MarketSpec& spec,
                                                 const std::optional<Deviation>& deviation = {});

}  // namespace matchbandit

#endif  // MATCHBANDIT_ALGORITHM_H_
