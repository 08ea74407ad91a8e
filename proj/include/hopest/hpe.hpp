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

#include <optional>
#include <string_view>
#include <utility>

#include "hopest/dynamics.hpp"

namespace hopest {

enum class Phase { kDrop, kStanceDown, kStanceUp, kRebound };

std::string_view to_string(Phase phase);
std::optional<Phase> phase_from_string(std::string_view s);
inline bool is_aerial(Phase p) {
  return p == Phase::kDrop || p == Phase::kRebound;
}

/// Touchdown jerk threshold, m/s^3. Jerk is taken from the low-passed
/// acceleration, whose slope does not grow with the sample rate, so one
/// threshold serves every rate.
inline constexpr double kDefaultJerkThreshold = 2000.0;

inline constexpr int kMaxJerkWindow = 8;

/// Hopping phase estimator state. Jerk is the least-squares slope over the
/// last `jerk_window` filtered accelerations (two-point difference for 2).
struct PhaseState {
  Phase phase = Phase::kDrop;
  double accel_hist[kMaxJerkWindow] = {};
  int hist_count = 0;
  int jerk_window = 2;
  double jerk_threshold = 2000.0;  // m/s^3
  double t_last = 0.0;
};

struct PhaseEvent {
  TransitionKind kind;
  double t;
};

/// One estimator tick. `accel_filt` is the HPE-filtered, gravity-compensated
/// world-frame vertical acceleration; `v_est` the current velocity estimate.
/// Transitions only advance around the Drop -> StanceDown -> StanceUp ->
/// Rebound cycle, at most one per tick.
std::pair<PhaseState, std::optional<PhaseEvent>> hpe_update(
    PhaseState state, double accel_filt, double v_est, double dt);

/// Slope of equally spaced samples (oldest first) by least squares.
double jerk_estimate(const double* samples, int n, double dt);

}  // namespace hopest
