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

#include "hopest/dynamics.hpp"
#include "hopest/hpe.hpp"
#include "hopest/hvse.hpp"
#include "hopest/sensing.hpp"

namespace hopest {

struct EstimatorConfig {
  FilterKind kind = FilterKind::kKf1;
  EstimatorParams params;
  RobotParams robot;
  double est_rate = 840.0;
  int jerk_window = 2;
  double jerk_threshold = 0.0;  // <= 0 selects kDefaultJerkThreshold
  std::optional<ImuptMask> imupts;  // defaults to everything the kind allows

  double dt() const { return 1.0 / est_rate; }
  double resolved_jerk_threshold() const {
    return jerk_threshold > 0.0 ? jerk_threshold
                                : kDefaultJerkThreshold;
  }
};

struct TickOutput {
  double u_raw = 0.0;   // range-selected, gravity-compensated acceleration
  double u_hvse = 0.0;  // after the HVSE low-pass, fed to prediction
  double u_hpe = 0.0;   // after the HPE low-pass, fed to the phase estimator
  Phase phase = Phase::kDrop;
  std::optional<TransitionKind> event;
  double z_prior = 0.0;  // position before this tick's IMUPTs
};

/// HPE and HVSE run together at the estimator rate: range selection,
/// two low-pass filters, prediction, phase update, then the IMUPTs of any
/// detected transition and, in aerial phases, the bias IMUPT.
class HoppingEstimator {
 public:
  HoppingEstimator(const EstimatorConfig& cfg, double z0, double v0);

  /// `total_duty` is the commanded duty sum in effect; `h_ch` the commanded
  /// height of the coming hop.
  TickOutput tick(const ImuSample& sample, double total_duty, double h_ch);

  const FilterState& filter() const { return fs_; }
  Phase phase() const { return ps_.phase; }
  const EstimatorConfig& config() const { return cfg_; }

 private:
  EstimatorConfig cfg_;
  ImuptMask mask_;
  FilterState fs_;
  PhaseState ps_;
  LowPassState lp_hvse_;
  LowPassState lp_hpe_;
};

}  // namespace hopest
