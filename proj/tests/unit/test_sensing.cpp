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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "hopest/dynamics.hpp"
#include "hopest/errors.hpp"
#include "hopest/sensing.hpp"

using namespace hopest;

namespace {

constexpr double kG = kStandardGravity;

// Index of the largest DFT magnitude in bins 1..n/2.
int dominant_bin(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  int best = 1;
  double best_mag = -1.0;
  for (int k = 1; k <= n / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += x[i] * std::polar(1.0, -2.0 * std::numbers::pi * k * i / n);
    }
    if (std::abs(acc) > best_mag) {
      best_mag = std::abs(acc);
      best = k;
    }
  }
  return best;
}

double alias_of(double f, double fs) {
  const double r = std::fmod(f, fs);
  return std::min(r, fs - r);
}

}  // namespace

TEST(SampleImu, HighAccelerationClipsLowRange) {
  SensorConfig cfg;
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const ImuSample s = sample_imu(0.0, 50.0 * kG, cfg, rng);
    EXPECT_EQ(s.lowg, 16.0 * kG);
    EXPECT_NEAR(s.highg, 50.0 * kG, 6.0 * cfg.highg_noise_std * kG);
  }
}

TEST(SampleImu, NoiselessIsExact) {
  const SensorConfig cfg = SensorConfig{}.noiseless();
  Rng rng(1);
  const ImuSample s = sample_imu(0.25, -kG, cfg, rng);
  EXPECT_EQ(s.lowg, -kG);
  EXPECT_EQ(s.highg, -kG);
  EXPECT_EQ(s.t, 0.25);
}

TEST(SampleImu, NoiseStdMatchesConfig) {
  SensorConfig cfg;
  Rng rng(42);
  const int n = 100000;
  double sum = 0.0, sum2 = 0.0, hsum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const ImuSample s = sample_imu(0.0, 0.0, cfg, rng);
    sum += s.lowg;
    sum2 += s.lowg * s.lowg;
    hsum2 += s.highg * s.highg;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum2 / n - mean * mean);
  EXPECT_NEAR(sd, 0.013 * kG, 0.05 * 0.013 * kG);
  EXPECT_NEAR(std::sqrt(hsum2 / n), 0.32 * kG, 0.05 * 0.32 * kG);
}

TEST(SampleImu, ClippingIsIdempotentAndBounded) {
  SensorConfig cfg;
  Rng rng(9);
  for (double a : {-200.0 * kG, -16.0 * kG, 0.0, 15.9 * kG, 99.0 * kG, 300.0 * kG}) {
    const ImuSample s = sample_imu(0.0, a, cfg, rng);
    EXPECT_LE(std::abs(s.lowg), 16.0 * kG);
    EXPECT_LE(std::abs(s.highg), 100.0 * kG);
    const ImuSample again =
        sample_imu(0.0, s.lowg, cfg.noiseless(), rng);
    EXPECT_EQ(again.lowg, s.lowg);
  }
}

TEST(SampleImu, BiasAddsConstantOffset) {
  SensorConfig cfg = SensorConfig{}.noiseless();
  cfg.bias = 0.3;
  Rng rng(1);
  EXPECT_DOUBLE_EQ(sample_imu(0.0, 2.0, cfg, rng).lowg, 2.3);
}

TEST(SampleImu, SameSeedSameStream) {
  SensorConfig cfg;
  Rng a(5), b(5);
  for (int i = 0; i < 10; ++i) {
    const ImuSample x = sample_imu(0.0, 1.0, cfg, a);
    const ImuSample y = sample_imu(0.0, 1.0, cfg, b);
    EXPECT_EQ(x.lowg, y.lowg);
    EXPECT_EQ(x.highg, y.highg);
  }
}

TEST(SensorConfig, Validation) {
  SensorConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.est_rate = 1000.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = SensorConfig{};
  cfg.lowg_range = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = SensorConfig{};
  cfg.highg_noise_std = -1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(SelectAccel, BelowSwitchUsesLowG) {
  const ImuSample s{0.0, 10.0 * kG, 10.5 * kG};
  EXPECT_EQ(select_accel(s, 14.24), 10.0 * kG);
}

TEST(SelectAccel, AboveSwitchUsesHighG) {
  const ImuSample s{0.0, 16.0 * kG, 20.0 * kG};
  EXPECT_EQ(select_accel(s, 14.24), 20.0 * kG);
  const ImuSample neg{0.0, -16.0 * kG, -20.0 * kG};
  EXPECT_EQ(select_accel(neg, 14.24), -20.0 * kG);
}

TEST(SelectAccel, BoundaryGoesHigh) {
  const ImuSample s{0.0, 14.24 * kG, 14.3 * kG};
  EXPECT_EQ(select_accel(s, 14.24), 14.3 * kG);
}

TEST(LowPass, AlphaAtSevenHertz) {
  const double expected = 1.0 - std::exp(-2.0 * std::numbers::pi * 7.0 / 840.0);
  EXPECT_NEAR(expected, 0.05101, 1e-5);
  LowPassState st{7.0, 0.0, true};
  const auto [next, y] = low_pass(st, 1.0, 1.0 / 840.0);
  EXPECT_NEAR(y, expected, 1e-15);
  EXPECT_EQ(next.y, y);
}

TEST(LowPass, FirstCallLatches) {
  LowPassState st{7.0};
  const auto [next, y] = low_pass(st, 3.5, 1.0 / 840.0);
  EXPECT_EQ(y, 3.5);
  EXPECT_TRUE(next.initialized);
}

TEST(LowPass, DcGainIsOne) {
  LowPassState st{5.0, 2.0, true};
  for (int i = 0; i < 1000; ++i) {
    double y;
    std::tie(st, y) = low_pass(st, 2.0, 1.0 / 840.0);
    ASSERT_EQ(y, 2.0);
  }
}

TEST(LowPass, HugeCutoffPassesThrough) {
  LowPassState st{1e12, 0.0, true};
  const auto [next, y] = low_pass(st, -4.0, 1.0 / 840.0);
  EXPECT_EQ(y, -4.0);
}

TEST(LowPass, OutputStaysWithinInputHull) {
  Rng rng(11);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  LowPassState st{20.0};
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    double y;
    std::tie(st, y) = low_pass(st, x, 1.0 / 840.0);
    ASSERT_GE(y, lo);
    ASSERT_LE(y, hi);
  }
}

TEST(Aliasing, DecimatedSinusoidAppearsAtAliasFrequency) {
  // A tone sampled from the 40 kHz truth grid at the sensor rate, the way
  // the closed loop samples it.
  const double fs = 840.0;
  const int n = 840;  // one second, 1 Hz bins
  const SensorConfig cfg = SensorConfig{}.noiseless();
  Rng rng(1);
  for (double f : {700.0, 1000.0, 1500.0, 2000.0}) {
    std::vector<double> x;
    for (int k = 0; k < n; ++k) {
      const long long step = std::llround(k / (fs * kSimStep));
      const double t = static_cast<double>(step) * kSimStep;
      x.push_back(sample_imu(t, std::sin(2.0 * std::numbers::pi * f * t), cfg, rng).lowg);
    }
    EXPECT_NEAR(dominant_bin(x), alias_of(f, fs), 1.0) << f;
  }
}

TEST(Gyro, StubReturnsZero) { EXPECT_EQ(sample_gyro_z(), 0.0); }
