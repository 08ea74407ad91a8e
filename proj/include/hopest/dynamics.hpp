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

namespace hopest {

/// Vertical two-mass hopper: a body sliding on a leg through an unactuated
/// prismatic joint. Extension of the joint (body moving down the leg)
/// stretches the main power spring; the opposite direction is stopped by a
/// stiff spring-damper hard stop.
struct RobotParams {
  double body_mass = 0.5619;              // m_B, kg
  double leg_mass = 0.0981;               // m_L, kg
  double spring_k = 704.0;                // K_s, N/m
  double hardstop_k = 400.0 * 704.0;      // K_lb, N/m
  double hardstop_b = 100.0;              // b_lb, N s/m
  double leg_top_to_leg_cm = 0.1053;      // L_1, m
  double leg_bottom_to_leg_cm = 0.2821;   // L_2, m
  double body_cm_below_leg_top = 0.1191;  // L_3, m
  double gravity = 9.81;                  // g, m/s^2

  // Band pretension at zero extension, and band hysteresis modeled as a
  // linear damper acting only while extended.
  double spring_preload = 20.0;  // N
  double spring_damping = 0.0;   // N s/m

  double total_mass() const { return body_mass + leg_mass; }

  /// z_B - z_L with the joint at zero extension.
  double rest_offset() const {
    return leg_top_to_leg_cm - body_cm_below_leg_top;
  }

  /// Signed CoM-to-foot offset with the spring unextended (negative: the
  /// CoM sits above the foot).
  double com_to_foot() const;

  /// Height of the tracked point above the foot when the joint is at rest.
  double contact_height() const { return -com_to_foot(); }

  /// Offset from the body CM to the tracked body-fixed point. The tracked
  /// point coincides with the robot CoM when the joint is at rest, so it
  /// sits at contact_height() at the instant of touchdown.
  double track_offset() const;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

/// Joint-space state of the simulator. Heights are world-frame, ground at 0.
struct SimState {
  double body_z = 0.0;  // body CM height
  double body_v = 0.0;
  double leg_z = 0.0;   // leg CM height
  double leg_v = 0.0;
  bool in_contact = false;
  double t = 0.0;

  double foot_z(const RobotParams& p) const {
    return leg_z - p.leg_bottom_to_leg_cm;
  }
  double extension(const RobotParams& p) const {
    return p.rest_offset() - (body_z - leg_z);
  }
  double track_z(const RobotParams& p) const {
    return body_z + p.track_offset();
  }
};

enum class TransitionKind { kTouchdown, kMaxSquat, kLiftoff, kApex };

std::string_view to_string(TransitionKind kind);
std::optional<TransitionKind> transition_from_string(std::string_view s);

struct TrueTransition {
  TransitionKind kind;
  double t;
  double z;  // tracked-point height
  double v;
};

/// Maximum commanded thrust-to-weight ratio.
inline constexpr double kMaxTwr = 0.837;
/// Apex-height error at which the height controller saturates.
inline constexpr double kSlidingBand = 0.33;
/// Proportional gain placing saturation at the sliding band, per meter.
inline constexpr double kHeightGain = kMaxTwr / kSlidingBand;
/// Internal integration step of the truth simulator (40 kHz).
inline constexpr double kSimStep = 2.5e-5;
inline constexpr double kPenetrationTol = 1e-4;

/// Body acceleration (kinematic, world frame) for the given state and
/// thrust command, with the same contact logic used by step().
double body_acceleration(const SimState& s, double twr, const RobotParams& p);

/// Semi-implicit Euler step of the two-mass system. Thrust
/// twr * (m_B + m_L) * g acts upward on the body. The ground is rigid: the
/// foot impact is plastic, and the leg stays pinned while the joint pushes it
/// into the ground.
SimState step(const SimState& s, double twr, const RobotParams& p, double dt);

/// Mechanical energy including joint potential.
double mechanical_energy(const SimState& s, const RobotParams& p);

/// Flight state at apex height `track_height` with the joint settled under
/// its preload.
SimState resting_flight_state(const RobotParams& p, double track_height);

/// Energy height z + v^2/(2g) for upward motion (z otherwise).
double predicted_apex(double z, double v, double gravity);

/// Proportional apex-height law, saturating at kMaxTwr once the predicted
/// apex falls kSlidingBand or more short of the target; never negative.
double height_control(double z_est, double v_est, double h_desired,
                      double gravity = 9.81);

/// Motor duty per rotor for a thrust command; 5% floor at zero thrust.
double duty_for_twr(double twr);
/// Sum over the four rotors.
double total_duty_for_twr(double twr);

}  // namespace hopest
