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

#include <random>
#include <utility>

namespace hopest {

inline constexpr double kStandardGravity = 9.81;

/// Dual-range accelerometer setup. Ranges and noise are in g; the noise is
/// the 1-sigma of additive Gaussian noise.
struct SensorConfig {
  double lowg_range = 16.0;
  double highg_range = 100.0;
  double lowg_noise_std = 0.013;
  double highg_noise_std = 0.32;
  double bias = 0.0;  // constant accelerometer bias, m/s^2
  double sensor_rate = 840.0;
  double est_rate = 840.0;

  void validate() const;
  SensorConfig noiseless() const {
    SensorConfig c = *this;
    c.lowg_noise_std = 0.0;
    c.highg_noise_std = 0.0;
    return c;
  }
};

/// Vertical specific force from both accelerometers, m/s^2, after noise and
/// clipping. Attitude is identity, so the body z axis is world up.
struct ImuSample {
  double t = 0.0;
  double lowg = 0.0;
  double highg = 0.0;
};

using Rng = std::mt19937_64;

/// Synthesizes one sample from the true specific force (kinematic
/// acceleration plus g). Aliasing is not added here: it arises because the
/// caller samples a 40 kHz truth at the sensor rate.
ImuSample sample_imu(double t, double specific_force, const SensorConfig& cfg,
                     Rng& rng);

/// Picks the low-g channel while it reads below the switching level
/// (`switch_g`, in g), the high-g channel otherwise. The boundary goes high.
double select_accel(const ImuSample& sample, double switch_g,
                    double gravity = kStandardGravity);

/// Angular rates are not synthesized in this vertical-only model.
inline double sample_gyro_z() { return 0.0; }

struct LowPassState {
  double cutoff = 1.0;  // Hz
  double y = 0.0;
  bool initialized = false;
};

/// First-order IIR: y += alpha * (x - y), alpha = 1 - exp(-2 pi fc dt).
/// The first call latches y = x.
std::pair<LowPassState, double> low_pass(LowPassState state, double x,
                                         double dt);

double low_pass_alpha(double cutoff, double dt);

}  // namespace hopest
