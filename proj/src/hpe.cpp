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

#include "hopest/hpe.hpp"

#include <algorithm>

namespace hopest {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::kDrop: return "drop";
    case Phase::kStanceDown: return "stance_down";
    case Phase::kStanceUp: return "stance_up";
    case Phase::kRebound: return "rebound";
  }
  return "";
}

std::optional<Phase> phase_from_string(std::string_view s) {
  if (s == "drop") return Phase::kDrop;
  if (s == "stance_down") return Phase::kStanceDown;
  if (s == "stance_up") return Phase::kStanceUp;
  if (s == "rebound") return Phase::kRebound;
  return std::nullopt;
}

double jerk_estimate(const double* samples, int n, double dt) {
  if (n == 2) return (samples[1] - samples[0]) / dt;
  const double mean_i = 0.5 * (n - 1);
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < n; ++i) {
    const double di = i - mean_i;
    num += di * samples[i];
    den += di * di;
  }
  return num / (den * dt);
}

std::pair<PhaseState, std::optional<PhaseEvent>> hpe_update(
    PhaseState state, double accel_filt, double v_est, double dt) {
  const int window = std::clamp(state.jerk_window, 2, kMaxJerkWindow);
  if (state.hist_count < window) {
    state.accel_hist[state.hist_count++] = accel_filt;
  } else {
    std::shift_left(state.accel_hist, state.accel_hist + window, 1);
    state.accel_hist[window - 1] = accel_filt;
  }
  state.t_last += dt;

  std::optional<PhaseEvent> event;
  const bool have_jerk = state.hist_count == window;
  const double jerk =
      have_jerk ? jerk_estimate(state.accel_hist, window, dt) : 0.0;

  switch (state.phase) {
    case Phase::kDrop:
      if (have_jerk && jerk > state.jerk_threshold) {
        state.phase = Phase::kStanceDown;
        event = PhaseEvent{TransitionKind::kTouchdown, state.t_last};
      }
      break;
    case Phase::kStanceDown:
      if (have_jerk && jerk < 0.0) {
        state.phase = Phase::kStanceUp;
        event = PhaseEvent{TransitionKind::kMaxSquat, state.t_last};
      }
      break;
    case Phase::kStanceUp:
      if (accel_filt < 0.0) {
        state.phase = Phase::kRebound;
        event = PhaseEvent{TransitionKind::kLiftoff, state.t_last};
      }
      break;
    case Phase::kRebound:
      if (v_est <= 0.0) {
        state.phase = Phase::kDrop;
        event = PhaseEvent{TransitionKind::kApex, state.t_last};
      }
      break;
  }
  return {state, event};
}

}  // namespace hopest
