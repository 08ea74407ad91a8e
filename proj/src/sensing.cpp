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

#include "hopest/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hopest/errors.hpp"

namespace hopest {

void SensorConfig::validate() const {
  if (!(lowg_range > 0.0) || !(highg_range > 0.0)) {
    throw ConfigError("sensing: accelerometer ranges must be positive");
  }
  if (lowg_noise_std < 0.0 || highg_noise_std < 0.0) {
    throw ConfigError("sensing: noise standard deviations must be >= 0");
  }
  if (!(sensor_rate > 0.0) || !(est_rate > 0.0)) {
    throw ConfigError("sensing: sensor_rate and est_rate must be positive");
  }
  if (est_rate > sensor_rate) {
    throw ConfigError("sensing: est_rate must not exceed sensor_rate");
  }
}

ImuSample sample_imu(double t, double specific_force, const SensorConfig& cfg,
                     Rng& rng) {
  constexpr double g = kStandardGravity;
  std::normal_distribution<double> unit(0.0, 1.0);
  // Draw both channels unconditionally so the stream does not depend on
  // which noise levels are zero.
  const double n_low = unit(rng);
  const double n_high = unit(rng);
  const double measured = specific_force + cfg.bias;
  ImuSample s;
  s.t = t;
  s.lowg = std::clamp(measured + n_low * cfg.lowg_noise_std * g,
                      -cfg.lowg_range * g, cfg.lowg_range * g);
  s.highg = std::clamp(measured + n_high * cfg.highg_noise_std * g,
                       -cfg.highg_range * g, cfg.highg_range * g);
  return s;
}

double select_accel(const ImuSample& sample, double switch_g, double gravity) {
  return std::abs(sample.lowg) < switch_g * gravity ? sample.lowg
                                                    : sample.highg;
}

double low_pass_alpha(double cutoff, double dt) {
  return 1.0 - std::exp(-2.0 * std::numbers::pi * cutoff * dt);
}

std::pair<LowPassState, double> low_pass(LowPassState state, double x,
                                         double dt) {
  if (!state.initialized) {
    state.y = x;
    state.initialized = true;
    return {state, x};
  }
  state.y += low_pass_alpha(state.cutoff, dt) * (x - state.y);
  return {state, state.y};
}

}  // namespace hopest
