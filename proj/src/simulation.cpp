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

#include "hopest/simulation.hpp"

#include <cmath>

#include "hopest/errors.hpp"

namespace hopest {

namespace {

// Internal step index of the k-th tick of a clock running at `rate`.
long long tick_step(long long k, double rate) {
  return std::llround(static_cast<double>(k) / (rate * kSimStep));
}

}  // namespace

std::string_view to_string(ControlSource s) {
  return s == ControlSource::kTrueState ? "gt" : "se";
}

std::optional<ControlSource> control_source_from_string(std::string_view s) {
  if (s == "gt") return ControlSource::kTrueState;
  if (s == "se") return ControlSource::kEstimate;
  return std::nullopt;
}

double HeightSchedule::at(double t) const {
  double h = steps.empty() ? 0.0 : steps.front().second;
  for (const auto& [t0, h0] : steps) {
    if (t >= t0) h = h0;
  }
  return h;
}

void HeightSchedule::validate() const {
  if (steps.empty()) throw ConfigError("height schedule is empty");
  for (size_t i = 0; i < steps.size(); ++i) {
    if (!(steps[i].second > 0.0)) {
      throw ConfigError("scheduled heights must be positive");
    }
    if (i > 0 && !(steps[i].first > steps[i - 1].first)) {
      throw ConfigError("height schedule times must increase");
    }
  }
}

EstimatorConfig estimator_config(const TrialConfig& cfg) {
  EstimatorConfig ec;
  ec.kind = cfg.kind;
  ec.params = cfg.est;
  ec.robot = cfg.robot;
  ec.est_rate = cfg.sensing.est_rate;
  ec.jerk_window = cfg.jerk_window;
  ec.jerk_threshold = cfg.jerk_threshold;
  ec.imupts = cfg.imupts;
  return ec;
}

HopLog simulate_trial(const TrialConfig& cfg) {
  if (!(cfg.duration > 0.0)) throw ConfigError("duration must be positive");
  cfg.robot.validate();
  cfg.sensing.validate();
  cfg.schedule.validate();
  const RobotParams& rp = cfg.robot;
  const double g = rp.gravity;
  const double est_rate = cfg.sensing.est_rate;
  const double control_rate =
      cfg.control_rate > 0.0 ? cfg.control_rate : est_rate;

  SimState s = resting_flight_state(rp, cfg.schedule.at(0.0));
  HoppingEstimator est(estimator_config(cfg), s.track_z(rp), s.body_v);
  Rng rng(cfg.seed);

  HopLog log;
  log.est_rate = est_rate;
  const long long n_steps = std::llround(cfg.duration / kSimStep);
  log.rows.reserve(static_cast<size_t>(cfg.duration * est_rate) + 2);

  long long k_sensor = 0, k_est = 0, k_ctrl = 0;
  long long next_sensor = 0, next_est = 0, next_ctrl = 0;
  ImuSample sample;
  double twr = 0.0;
  bool awaiting_ms = false;

  for (long long n = 0; n <= n_steps; ++n) {
    const double t = static_cast<double>(n) * kSimStep;
    const double a_kin = body_acceleration(s, twr, rp);
    const double h_des = cfg.schedule.at(t);

    if (n == next_sensor) {
      sample = sample_imu(t, a_kin + g, cfg.sensing, rng);
      next_sensor = tick_step(++k_sensor, cfg.sensing.sensor_rate);
    }
    if (n == next_est) {
      const TickOutput out = est.tick(sample, total_duty_for_twr(twr), h_des);
      const FilterState& fs = est.filter();
      LogRow r;
      r.t = t;
      r.z_true = s.track_z(rp);
      r.v_true = s.body_v;
      r.a_true = a_kin;
      r.a_lowg = sample.lowg;
      r.a_highg = sample.highg;
      r.a_world_est = out.u_hvse;
      r.phase = out.phase;
      r.event = out.event;
      r.z_est = fs.z();
      r.v_est = fs.v();
      r.P00 = fs.P(0, 0);
      r.P01 = fs.P(0, 1);
      r.P11 = fs.P(1, 1);
      r.twr = twr;  // command in effect when the sample was taken
      r.h_desired = h_des;
      r.contact = s.in_contact;
      log.rows.push_back(r);
      next_est = tick_step(++k_est, est_rate);
    }
    if (n == next_ctrl) {
      if (est.phase() == Phase::kRebound) {
        const bool gt = cfg.control == ControlSource::kTrueState;
        const double z = gt ? s.track_z(rp) : est.filter().z();
        const double v = gt ? s.body_v : est.filter().v();
        twr = height_control(z, v, h_des, g);
      } else {
        twr = 0.0;
      }
      next_ctrl = tick_step(++k_ctrl, control_rate);
    }
    if (n == n_steps) break;

    const SimState next = step(s, twr, rp, kSimStep);
    const double t_next = static_cast<double>(n + 1) * kSimStep;
    if (!s.in_contact && next.in_contact) {
      log.true_transitions.push_back(
          {TransitionKind::kTouchdown, t_next, next.track_z(rp), next.body_v});
      awaiting_ms = true;
    }
    if (next.in_contact && awaiting_ms && next.body_v >= 0.0) {
      log.true_transitions.push_back(
          {TransitionKind::kMaxSquat, t_next, next.track_z(rp), next.body_v});
      awaiting_ms = false;
    }
    if (s.in_contact && !next.in_contact) {
      log.true_transitions.push_back(
          {TransitionKind::kLiftoff, t_next, next.track_z(rp), next.body_v});
      awaiting_ms = false;
    }
    if (!s.in_contact && !next.in_contact && s.body_v > 0.0 &&
        next.body_v <= 0.0) {
      log.true_transitions.push_back(
          {TransitionKind::kApex, t_next, next.track_z(rp), next.body_v});
    }
    s = next;
  }
  return log;
}

}  // namespace hopest
