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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "hopest/dynamics.hpp"

namespace hopest {

enum class FilterKind { kKf1, kKf2, kEskf1, kEskf2 };

std::string_view to_string(FilterKind kind);
/// Accepts kf1, kf2, eskf1, eskf2 (case-insensitive).
std::optional<FilterKind> filter_kind_from_string(std::string_view s);

/// Number of filter states: 2 for KF1, 3 (with accelerometer bias) otherwise.
int state_dim(FilterKind kind);
bool is_error_state(FilterKind kind);

/// Trainable estimator parameters, in declaration order. The names used in
/// configuration and parameter files are given by param_name().
enum class ParamId : std::uint8_t {
  kFHvse,
  kFHpe,
  kGSwitch,
  kSigmaAz,
  kSigmaBz,
  kSigmaVz,
  kSigmaPz,
  kCVel2,
  kCVel1,
  kCVel0,
  kCCh1,
  kCCh0,
  kCM1,
  kCM0,
};
inline constexpr int kParamCount = 14;

std::string_view param_name(ParamId id);
std::optional<ParamId> param_from_name(std::string_view name);

struct ParamBounds {
  double lo;
  double hi;
  double range() const { return hi - lo; }
};
ParamBounds default_bounds(ParamId id);

struct EstimatorParams {
  double f_hvse = 7.0;       // Hz
  double f_hpe = 8.0;        // Hz
  double g_switch = 14.24;   // g
  double sigma_az = 9.9857;  // m/s^2
  double sigma_bz = 0.01;    // m/s^2
  double sigma_vz = 9.5722;  // m/s
  double sigma_pz = 0.0091;  // m
  double c_vel2 = -1.1246;
  double c_vel1 = 5.9203;
  double c_vel0 = 6.7054;
  double c_ch1 = 6.2138;
  double c_ch0 = 8.4355;
  double c_m1 = 1.0;
  double c_m0 = 0.0;

  double& operator[](ParamId id);
  double operator[](ParamId id) const;

  /// Neutral liftoff-velocity scaling (delta = 1) with the other values
  /// left at their defaults.
  static EstimatorParams identity_scaling();

  /// Throws ConfigError if any value lies outside `bounds`.
  void validate(std::span<const ParamBounds, kParamCount> bounds) const;
  void validate() const;

  bool operator==(const EstimatorParams&) const = default;
};

std::array<ParamBounds, kParamCount> default_bounds_table();

/// Parameters used by the given filter kind; the others are frozen.
std::vector<ParamId> trainable_params(FilterKind kind);

using StateVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using StateMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

/// Default initial covariance of the position/velocity block, taken from a
/// converged filter.
Eigen::Matrix2d default_initial_covariance();
inline constexpr double kInitialBiasVariance = 1e-2;

struct FilterState {
  FilterKind kind = FilterKind::kKf1;
  StateVec x;   // [z, zdot] or [z, zdot, zddot_bias]
  StateMat P;
  StateVec dx;  // error state, zero outside of an update for ESKF kinds

  int dim() const { return static_cast<int>(x.size()); }
  double z() const { return x(0); }
  double v() const { return x(1); }
  double bias() const { return dim() == 3 ? x(2) : 0.0; }
};

FilterState make_filter(FilterKind kind, double z0, double v0);
FilterState make_filter(FilterKind kind, double z0, double v0,
                        const Eigen::Matrix2d& P0);

/// KF prediction x = F x + G u, P = F P F^T + Q with Q = G sigma_az^2 G^T
/// (plus a sigma_bz^2 dt bias random walk for 3-state kinds). `u` is the
/// gravity-compensated world-frame vertical acceleration.
FilterState predict(const FilterState& fs, double u, double dt,
                    const EstimatorParams& p);

enum class ImuptKind {
  kPositionTd,
  kPositionLo,
  kVelocityMs,
  kVelocityLo,
  kAccelBiasAerial,
};
std::string_view to_string(ImuptKind kind);

struct ImuptMeasurement {
  ImuptKind kind;
  double value;
  double variance;  // R
};

/// Index of the state component an IMUPT observes.
int observed_index(ImuptKind kind);

/// Scalar Kalman update with H selecting the observed component. ESKF kinds
/// update the error state, inject it into the nominal state and reset it.
/// The covariance uses the Joseph form and is symmetrized.
FilterState measurement_update(const FilterState& fs,
                               const ImuptMeasurement& m);

/// Signed CoM-to-foot offset L_f with the spring unextended.
double compute_lf(const RobotParams& rp);

/// Liftoff velocity scaling from the liftoff velocity estimate and the
/// commanded height of the coming hop.
double delta_vlo(double v_lo, double h_ch, const EstimatorParams& p);

bool imupt_allowed(FilterKind filter, ImuptKind imupt);
std::vector<ImuptKind> allowed_imupts(FilterKind filter);

/// Bit set of enabled IMUPTs, indexed by ImuptKind.
using ImuptMask = std::uint8_t;
ImuptMask imupt_bit(ImuptKind kind);
ImuptMask default_imupt_mask(FilterKind filter);

struct ImuptContext {
  Eigen::Matrix3d attitude = Eigen::Matrix3d::Identity();  // body to world
  double h_ch = 1.0;           // commanded height of the coming hop, m
  double total_duty = 0.2;     // sum of the four commanded motor duties
  double world_accel = 0.0;    // current world-frame input u, m/s^2
  const EstimatorParams* params = nullptr;
  const RobotParams* robot = nullptr;
};

/// Builds the inferred measurement for `kind` from the current state and
/// context. Throws ImuptRejected if the filter kind does not support it.
ImuptMeasurement make_imupt(const FilterState& fs, ImuptKind kind,
                            const ImuptContext& ctx);

/// make_imupt followed by measurement_update.
FilterState apply_imupt(const FilterState& fs, ImuptKind kind,
                        const ImuptContext& ctx);

/// Applies every enabled IMUPT attached to a phase transition. At liftoff
/// the velocity measurement uses the velocity estimate from before the
/// position update.
FilterState apply_transition_imupts(const FilterState& fs,
                                    TransitionKind event,
                                    const ImuptContext& ctx, ImuptMask mask);

/// True if P is symmetric and its smallest eigenvalue is >= -tol.
bool covariance_healthy(const StateMat& P, double tol = 1e-12);

}  // namespace hopest
