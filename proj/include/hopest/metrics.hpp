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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hopest/dynamics.hpp"
#include "hopest/estimator.hpp"
#include "hopest/hop_log.hpp"

namespace hopest {

/// One hop cycle, from a true touchdown to the next. Estimated quantities
/// come from the log's estimate columns.
struct HopRecord {
  double t_TD = 0.0;
  double h_TD = 0.0;  // estimated foot height at the true touchdown
  double t_HA = 0.0;  // first detected apex in the cycle
  double h_HA = 0.0;
  double t_HA_true = 0.0;
  double h_HA_true = 0.0;
  double h_desired = 0.0;
  bool has_est_apex = false;
  bool has_true_apex = false;
  std::vector<double> z_true, z_est, v_true, v_est;
  std::vector<bool> aerial;  // detected phase was drop or rebound
};

/// Splits a log into TD-to-TD cycles using tick-resolution true transitions.
std::vector<HopRecord> build_hop_records(const HopLog& log,
                                         const RobotParams& rp = {});

struct MetricsReport {
  double M1 = 0.0;  // %, mean per-hop nMAE of position
  double M2 = 0.0;  // %, mean per-hop nMAE of velocity
  double M3 = 0.0;  // %, apex height MAPE
  double M4 = 0.0;  // s, apex time MAE
  double M5 = 0.0;  // m, true apex vs desired apex MAE
  double gamma1 = 0.0;  // apex MAPE as a fraction
  double gamma2 = 0.0;  // pooled position RMSE, m
  double gamma3 = 0.0;  // pooled velocity RMSE, m/s
  int n_hops = 0;
  int n_apex = 0;
  std::vector<double> h_g;  // ground-height series
  std::vector<std::string> diagnostics;
};

/// `aerial_only` restricts M1/M2 and the RMSEs to samples the phase
/// estimator classified as aerial.
MetricsReport compute_metrics(std::span<const HopRecord> records,
                              bool aerial_only = false);

/// Estimated drop of one hop: the apex height and the foot height at the
/// touchdown that ends the drop.
struct GroundSample {
  double h_TD;
  double h_HA;
};

/// Pairs each record's touchdown with the apex of the preceding record.
std::vector<GroundSample> ground_samples(std::span<const HopRecord> records);

/// h_g[n] = h_g[n-1] + (dh1 + dh2) / 2 with dh1 the loss in drop height
/// from the previous hop and dh2 = h_TD[n]; h_g[0] = 0.
std::vector<double> ground_height_track(std::span<const GroundSample> hops);

struct AgilityInputs {
  double h1 = 1.0;
  double h0 = 1.0;
  double t_s = 0.0;
  double gamma_r = 0.0;
  double gamma_d = 0.0;
  double gamma_lr = 0.0;
  double gamma_ld = 0.0;
  double zeta_s = 1.0;
  int beta = 0;
  double g = 9.81;

  /// Throws ConfigError when a physical constraint is violated.
  void validate() const;
};

struct AgilityResult {
  double nu_uha = 0.0;
  double nu_vja = 0.0;
  double nu_ha = 0.0;
  double t_r = 0.0;
  double t_d = 0.0;
  double h0_implied = 0.0;
};

/// Model mode: phase times from the average aerial accelerations.
AgilityResult agility(const AgilityInputs& a);

struct DirectAgility {
  double nu_vja;
  double nu_ha;
};
/// Measured mode: apex height with stance-through-apex and cycle times.
DirectAgility agility_direct(double h1, double t_apogee, double t_cycle);

enum class BaselineKind { kBa1, kDr1, kKf3 };
std::string_view to_string(BaselineKind k);

/// Estimate columns replaced by a baseline. BA1 flies the true liftoff
/// state ballistically, DR1 integrates the range-selected accelerometer
/// from the true liftoff state, and both use truth during stance (a leg
/// encoder). KF3 is KF1 with only the touchdown position IMUPT, built on
/// `kf3_base`.
HopLog baseline_estimates(const HopLog& log, BaselineKind kind,
                          const EstimatorConfig& kf3_base = {});

/// Horizontal distance error of an optical-flow odometer whose range finder
/// is replaced by the height estimate, in % of distance, from M1 in %.
double optical_flow_error_proxy(double m1_percent);

}  // namespace hopest
