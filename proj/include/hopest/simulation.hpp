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

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "hopest/dynamics.hpp"
#include "hopest/estimator.hpp"
#include "hopest/hop_log.hpp"
#include "hopest/sensing.hpp"

namespace hopest {

enum class ControlSource { kTrueState, kEstimate };
std::string_view to_string(ControlSource s);
/// Accepts gt and se.
std::optional<ControlSource> control_source_from_string(std::string_view s);

/// Piecewise-constant desired apex height: (start time, height) pairs in
/// increasing time order.
struct HeightSchedule {
  std::vector<std::pair<double, double>> steps;

  static HeightSchedule constant(double h) { return {{{0.0, h}}}; }
  double at(double t) const;
  void validate() const;
};

struct TrialConfig {
  RobotParams robot;
  SensorConfig sensing;
  EstimatorParams est;
  FilterKind kind = FilterKind::kKf1;
  ControlSource control = ControlSource::kTrueState;
  double control_rate = 0.0;  // <= 0 runs the controller at est_rate
  HeightSchedule schedule = HeightSchedule::constant(1.0);
  double duration = 10.0;
  std::uint64_t seed = 1;
  int jerk_window = 2;
  double jerk_threshold = 0.0;  // <= 0 selects kDefaultJerkThreshold
  std::optional<ImuptMask> imupts;
};

EstimatorConfig estimator_config(const TrialConfig& cfg);

/// Closed-loop trial starting at rest at the first scheduled height, in
/// flight, with the estimate initialized to the true state. Thrust is only
/// commanded while the phase estimator reports the rebound phase.
HopLog simulate_trial(const TrialConfig& cfg);

}  // namespace hopest
