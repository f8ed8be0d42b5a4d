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

#ifndef MATCHBANDIT_LEARNER_STATS_H_
#define MATCHBANDIT_LEARNER_STATS_H_

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace matchbandit {

// One player's running estimates of its preference values, with the
// confidence interval mu_hat +- sqrt(6 ln T / n) where T is the horizon.
class LearnerStats {
 public:
  LearnerStats(int n_arms, int64_t horizon)
      : count_(n_arms, 0),
        mean_(n_arms, 0.0),
        six_log_t_(6.0 * std::log(static_cast<double>(horizon))) {}

  int n_arms() const { return static_cast<int>(count_.size()); }
  int64_t count(int arm) const { return count_[arm]; }
  // Meaningful only when count(arm) > 0.
  double mean(int arm) const { return mean_[arm]; }

  double radius(int arm) const {
    return count_[arm] == 0 ? std::numeric_limits<double>::infinity()
                            : std::sqrt(six_log_t_ / static_cast<double>(count_[arm]));
  }
  double ucb(int arm) const {
    return count_[arm] == 0 ? std::numeric_limits<double>::infinity() : mean_[arm] + radius(arm);
  }
  double lcb(int arm) const {
    return count_[arm] == 0 ? -std::numeric_limits<double>::infinity() : mean_[arm] - radius(arm);
  }
  bool Covers(int arm, double true_mean) const {
    return count_[arm] == 0 || std::abs(mean_[arm] - true_mean) <= radius(arm);
  }

  void Update(int arm, double reward) {
    const double n = static_cast<double>(count_[arm]);
    mean_[arm] = (mean_[arm] * n + reward) / (n + 1.0);
    ++count_[arm];
  }

 private:
  std::vector<int64_t> count_;
  std::vector<double> mean_;
  double six_log_t_;
};

}  // namespace matchbandit

#endif  // MATCHBANDIT_LEARNER_STATS_H_
