// Copyright 2026 The hopest Authors.
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

#pragma once

#include <string>
#include <vector>

#include "hopest/config.hpp"
#include "hopest/simulation.hpp"

namespace hopest {

/// Estimation errors (estimate minus truth) pooled over the noisy seeds in
/// one time bin, and the noiseless run's mean error in the same bin.
struct SweepBin {
  double t = 0.0;  // bin start
  int n = 0;
  double mean_pos = 0.0;
  double std_pos = 0.0;
  double mean_vel = 0.0;
  double std_vel = 0.0;
  double mean_pos_clean = 0.0;
  double mean_vel_clean = 0.0;
};

struct SweepResult {
  double frequency = 0.0;
  std::vector<SweepBin> bins;
  double tail_std_pos = 0.0;  // pooled over the final `tail` seconds
  double tail_std_vel = 0.0;
  double early_std_pos = 0.0;  // pooled over [tail, 2 tail)
  double early_std_vel = 0.0;
  double growth_pos = 0.0;  // relative_rise of the bin stds from t = tail on
  double growth_vel = 0.0;
  bool unbounded = false;
  int late_touchdowns = 0;  // true touchdowns in the tail window, first seed
  int diverged_runs = 0;  // noisy runs whose estimate became non-finite
};

/// Least-squares rise of y across the span of t, divided by the mean of y.
/// A constant series gives 0, a ramp from zero gives 2. Fewer than two
/// points, or a zero mean, give 0.
double relative_rise(const std::vector<double>& t, const std::vector<double>& y);

/// Position std rise above which a run counts as unbounded: the fitted
/// trend climbs by more than the run's mean std.
inline constexpr double kUnboundedGrowth = 1.0;

/// Trial used for one sweep run: sensor and estimator at `frequency`, the
/// controller on the true state at min(control_rate, frequency).
TrialConfig sweep_trial(const TrialConfig& base, const SweepSettings& s,
                        double frequency, bool noisy, int seed_index);

/// A noisy run whose filter faults on non-finite values makes the frequency
/// diverged: infinite tail std and growth, classified unbounded.
SweepResult sweep_frequency(const TrialConfig& base, const SweepSettings& s,
                            double frequency, int threads = 1);

/// All frequencies of `s`, runs spread over `threads`.
std::vector<SweepResult> run_sweep(const TrialConfig& base,
                                   const SweepSettings& s, int threads = 0);

std::string sweep_bins_csv(const std::vector<SweepResult>& results);
std::string sweep_summary_csv(const std::vector<SweepResult>& results);

}  // namespace hopest
