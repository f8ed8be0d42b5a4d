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

#include "matchbandit/algorithm.h"

#include <charconv>

#include "matchbandit/aetda.h"
#include "matchbandit/etda.h"
#include "matchbandit/oda.h"

namespace matchbandit {
namespace {

int ParseInt(std::string_view text, std::string_view what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw SpecError("bad " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> Split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    const size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

bool PolicyFits(AlgorithmKind kind, DeviationPolicy::Kind policy) {
  using K = DeviationPolicy::Kind;
  switch (policy) {
    case K::kHonest:
      return true;
    case K::kAlwaysMinusOne:
    case K::kWrongArm:
      return kind == AlgorithmKind::kAetdaCentral || kind == AlgorithmKind::kAetdaDecentral;
    case K::kNeverResolve:
      return kind == AlgorithmKind::kEtda;
    case K::kProbe:
      return kind == AlgorithmKind::kOda;
  }
  return false;
}

}  // namespace

std::string_view ToString(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::kEtda:
      return "etda";
    case AlgorithmKind::kAetdaCentral:
      return "aetda_central";
    case AlgorithmKind::kAetdaDecentral:
      return "aetda_decentral";
    case AlgorithmKind::kOda:
      return "oda";
  }
  return "unknown";
}

AlgorithmKind ParseAlgorithmKind(std::string_view name) {
  if (name == "etda") return AlgorithmKind::kEtda;
  if (name == "aetda_central" || name == "aetda") return AlgorithmKind::kAetdaCentral;
  if (name == "aetda_decentral") return AlgorithmKind::kAetdaDecentral;
  if (name == "oda") return AlgorithmKind::kOda;
  throw SpecError("unknown algorithm: " + std::string(name));
}

DeviationPolicy DeviationPolicy::Parse(std::string_view text) {
  const auto parts = Split(text, ':');
  DeviationPolicy p;
  const std::string_view head = parts[0];
  if (head == "honest" && parts.size() == 1) {
    p.kind = Kind::kHonest;
  } else if (head == "always_minus_one" && parts.size() == 1) {
    p.kind = Kind::kAlwaysMinusOne;
  } else if (head == "never_resolve" && parts.size() == 1) {
    p.kind = Kind::kNeverResolve;
  } else if (head == "wrong_arm" && parts.size() == 2) {
    p.kind = Kind::kWrongArm;
    p.arm = ParseInt(parts[1], "arm");
  } else if (head == "probe" && (parts.size() == 2 || parts.size() == 3)) {
    p.kind = Kind::kProbe;
    p.arm = ParseInt(parts[1], "arm");
    if (parts.size() == 3) p.period = ParseInt(parts[2], "period");
    if (p.period < 1) throw SpecError("probe period must be >= 1");
  } else {
    throw SpecError("unknown deviation policy: '" + std::string(text) + "'");
  }
  if ((p.kind == Kind::kWrongArm || p.kind == Kind::kProbe) && p.arm < 0) {
    throw SpecError("deviation arm must be >= 0");
  }
  return p;
}

std::string DeviationPolicy::ToString() const {
  switch (kind) {
    case Kind::kHonest:
      return "honest";
    case Kind::kAlwaysMinusOne:
      return "always_minus_one";
    case Kind::kNeverResolve:
      return "never_resolve";
    case Kind::kWrongArm:
      return "wrong_arm:" + std::to_string(arm);
    case Kind::kProbe:
      return "probe:" + std::to_string(arm) + ":" + std::to_string(period);
  }
  return "unknown";
}

Deviation Deviation::Parse(std::string_view text) {
  const size_t colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw SpecError("deviation must look like <player>:<policy>");
  }
  Deviation d;
  d.player = ParseInt(text.substr(0, colon), "deviant player");
  if (d.player < 0) throw SpecError("deviant player must be >= 0");
  d.policy = DeviationPolicy::Parse(text.substr(colon + 1));
  return d;
}

std::string Deviation::ToString() const {
  return std::to_string(player) + ":" + policy.ToString();
}

void EventLog::Add(int player, std::string_view kind, std::string_view detail) {
  std::string& f = flags_[player];
  if (!f.empty()) f += '|';
  f += kind;
  if (!detail.empty()) {
    f += ':';
    f += detail;
  }
  auto it = totals_.find(kind);
  if (it == totals_.end()) {
    totals_.emplace(std::string(kind), 1);
  } else {
    ++it->second;
  }
}

void EventLog::ClearRound() {
  for (std::string& f : flags_) f.clear();
}

int64_t EventLog::total(std::string_view kind) const {
  const auto it = totals_.find(kind);
  return it == totals_.end() ? 0 : it->second;
}

void CheckPreconditions(AlgorithmKind kind, const MarketSpec& spec) {
  switch (kind) {
    case AlgorithmKind::kEtda:
      if (!spec.all_responsive()) throw SpecError("etda requires responsive arms");
      if (!spec.etda_precondition()) {
        throw SpecError("etda requires N <= K * C_min (N=" + std::to_string(spec.n_players()) +
                        ", K=" + std::to_string(spec.n_arms()) +
                        ", C_min=" + std::to_string(spec.min_capacity()) + ")");
      }
      return;
    case AlgorithmKind::kAetdaCentral:
    case AlgorithmKind::kAetdaDecentral:
      if (!spec.all_responsive()) throw SpecError("aetda requires responsive arms");
      if (!spec.aetda_precondition()) {
        throw SpecError("aetda requires N <= C (N=" + std::to_string(spec.n_players()) +
                        ", C=" + std::to_string(spec.total_capacity()) + ")");
      }
      return;
    case AlgorithmKind::kOda:
      for (int j = 0; j < spec.n_arms(); ++j) {
        const auto audit = CheckSubstitutable(spec.arm(j), spec.n_players());
        if (!audit.substitutable) {
          throw SpecError("oda requires substitutable arms; arm " + std::to_string(j) +
                          " fails on offer " + ToString(audit.witness->offered));
        }
      }
      return;
  }
}

std::unique_ptr<MatchingAlgorithm> MakeAlgorithm(AlgorithmKind kind, const MarketSpec& spec,
                                                 const std::optional<Deviation>& deviation) {
  CheckPreconditions(kind, spec);
  if (deviation) {
    if (deviation->player < 0 || deviation->player >= spec.n_players()) {
      throw SpecError("deviant player out of range");
    }
    if (!PolicyFits(kind, deviation->policy.kind)) {
      throw SpecError("deviation '" + deviation->policy.ToString() + "' does not apply to " +
                      std::string(ToString(kind)));
    }
    if (deviation->policy.arm >= spec.n_arms()) throw SpecError("deviation arm out of range");
  }
  switch (kind) {
    case AlgorithmKind::kEtda:
      return std::make_unique<Etda>(spec, deviation);
    case AlgorithmKind::kAetdaCentral:
      return std::make_unique<Aetda>(spec, false, deviation);
    case AlgorithmKind::kAetdaDecentral:
      return std::make_unique<Aetda>(spec, true, deviation);
    case AlgorithmKind::kOda:
      return std::make_unique<Oda>(spec, deviation);
  }
  throw SpecError("unknown algorithm");
}

}  // namespace matchbandit
