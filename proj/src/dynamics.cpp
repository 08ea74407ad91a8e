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

#include "hopest/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hopest/errors.hpp"

namespace hopest {

namespace {

std::string fault_message(const std::string& field, double value) {
  std::ostringstream os;
  os << "non-finite simulator state: " << field << " = " << value;
  return os.str();
}

// Upward force of the joint on the body (the leg receives the opposite).
double joint_force(const SimState& s, const RobotParams& p) {
  const double x = s.extension(p);
  const double x_rate = s.leg_v - s.body_v;
  double f = p.spring_preload + p.spring_k * x;
  if (x > 0.0) {
    f += p.spring_damping * x_rate;
  } else {
    // The hard stop can only push the body back down the leg.
    f += std::min(0.0, p.hardstop_k * x + p.hardstop_b * x_rate);
  }
  return f;
}

void check_finite(const SimState& s) {
  if (!std::isfinite(s.body_z)) throw DynamicsFault("body_z", s.body_z);
  if (!std::isfinite(s.body_v)) throw DynamicsFault("body_v", s.body_v);
  if (!std::isfinite(s.leg_z)) throw DynamicsFault("leg_z", s.leg_z);
  if (!std::isfinite(s.leg_v)) throw DynamicsFault("leg_v", s.leg_v);
  if (!std::isfinite(s.t)) throw DynamicsFault("t", s.t);
}

}  // namespace

DynamicsFault::DynamicsFault(const std::string& field, double value)
    : std::runtime_error(fault_message(field, value)), field_(field) {}

double RobotParams::com_to_foot() const {
  const double m = total_mass();
  return (body_mass * body_cm_below_leg_top + leg_mass * leg_top_to_leg_cm) /
             m -
         (leg_top_to_leg_cm + leg_bottom_to_leg_cm);
}

double RobotParams::track_offset() const {
  // Body CM above the foot at rest is L_1 + L_2 - L_3.
  return contact_height() -
         (leg_top_to_leg_cm + leg_bottom_to_leg_cm - body_cm_below_leg_top);
}

void RobotParams::validate() const {
  auto require_positive = [](const char* name, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << "robot parameter " << name << " must be positive (got " << v << ")";
      throw ConfigError(os.str());
    }
  };
  require_positive("m_B", body_mass);
  require_positive("m_L", leg_mass);
  require_positive("K_s", spring_k);
  require_positive("K_lb", hardstop_k);
  require_positive("L_1", leg_top_to_leg_cm);
  require_positive("L_2", leg_bottom_to_leg_cm);
  require_positive("L_3", body_cm_below_leg_top);
  require_positive("g", gravity);
  if (hardstop_b < 0.0 || spring_damping < 0.0 || spring_preload < 0.0) {
    throw ConfigError("robot damping and preload must be non-negative");
  }
}

std::string_view to_string(TransitionKind kind) {
  switch (kind) {
    case TransitionKind::kTouchdown: return "TD";
    case TransitionKind::kMaxSquat: return "MS";
    case TransitionKind::kLiftoff: return "LO";
    case TransitionKind::kApex: return "HA";
  }
  return "";
}

std::optional<TransitionKind> transition_from_string(std::string_view s) {
  if (s == "TD") return TransitionKind::kTouchdown;
  if (s == "MS") return TransitionKind::kMaxSquat;
  if (s == "LO") return TransitionKind::kLiftoff;
  if (s == "HA") return TransitionKind::kApex;
  return std::nullopt;
}

double body_acceleration(const SimState& s, double twr, const RobotParams& p) {
  const double thrust = twr * p.total_mass() * p.gravity;
  return (joint_force(s, p) + thrust) / p.body_mass - p.gravity;
}

SimState step(const SimState& s, double twr, const RobotParams& p, double dt) {
  check_finite(s);
  const double f = joint_force(s, p);
  const double thrust = twr * p.total_mass() * p.gravity;
  const double body_a = (f + thrust) / p.body_mass - p.gravity;

  SimState next = s;
  next.t = s.t + dt;
  next.body_v = s.body_v + body_a * dt;
  next.body_z = s.body_z + next.body_v * dt;

  bool pinned = s.in_contact;
  double leg_a = -f / p.leg_mass - p.gravity;
  if (pinned && leg_a > 0.0) pinned = false;  // joint lifts the leg

  if (pinned) {
    next.leg_v = 0.0;
    next.leg_z = s.leg_z;
    next.in_contact = true;
  } else {
    next.in_contact = false;
    next.leg_v = s.leg_v + leg_a * dt;
    next.leg_z = s.leg_z + next.leg_v * dt;
    if (next.foot_z(p) < 0.0) {
      // Plastic foot impact on rigid ground.
      next.leg_z = p.leg_bottom_to_leg_cm;
      next.leg_v = 0.0;
      next.in_contact = true;
    }
  }
  check_finite(next);
  return next;
}

double mechanical_energy(const SimState& s, const RobotParams& p) {
  const double x = s.extension(p);
  double u = p.spring_preload * x + 0.5 * p.spring_k * x * x;
  if (x < 0.0) u += 0.5 * p.hardstop_k * x * x;
  return 0.5 * p.body_mass * s.body_v * s.body_v +
         0.5 * p.leg_mass * s.leg_v * s.leg_v +
         p.gravity * (p.body_mass * s.body_z + p.leg_mass * s.leg_z) + u;
}

SimState resting_flight_state(const RobotParams& p, double track_height) {
  const double x_eq = -p.spring_preload / (p.spring_k + p.hardstop_k);
  SimState s;
  s.body_z = track_height - p.track_offset();
  s.leg_z = s.body_z - p.rest_offset() + x_eq;
  s.in_contact = false;
  return s;
}

double predicted_apex(double z, double v, double gravity) {
  return v > 0.0 ? z + v * v / (2.0 * gravity) : z;
}

double height_control(double z_est, double v_est, double h_desired,
                      double gravity) {
  const double error = h_desired - predicted_apex(z_est, v_est, gravity);
  return std::clamp(kHeightGain * error, 0.0, kMaxTwr);
}

double duty_for_twr(double twr) {
  return 0.05 + 0.95 * std::clamp(twr, 0.0, kMaxTwr) / kMaxTwr;
}

double total_duty_for_twr(double twr) { return 4.0 * duty_for_twr(twr); }

}  // namespace hopest
