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

#include <cmath>
#include <random>

#include "hopest/sweep.hpp"

using namespace hopest;

TEST(RelativeRise, ConstantAndRampOracles) {
  std::vector<double> t, flat, ramp, line;
  for (int i = 0; i <= 80; ++i) {
    t.push_back(2.0 + 0.1 * i);
    flat.push_back(0.3);
    ramp.push_back(5.0 * 0.1 * i);
    line.push_back(1.0 + 0.5 * (t.back() - 2.0));
  }
  EXPECT_NEAR(relative_rise(t, flat), 0.0, 1e-12);
  EXPECT_NEAR(relative_rise(t, ramp), 2.0, 1e-12);
  // rise 0.5 * 8 = 4 over a mean of 1 + 2 = 3
  EXPECT_NEAR(relative_rise(t, line), 4.0 / 3.0, 1e-12);
  EXPECT_EQ(relative_rise({1.0}, {2.0}), 0.0);
  EXPECT_EQ(relative_rise(t, std::vector<double>(t.size(), 0.0)), 0.0);
}

TEST(RelativeRise, PeriodicTrendShrinksWithSpan) {
  // Continuous oracle for 1 + a sin(2 pi t) over [0, T]: rise -6 a / (pi T).
  for (double span : {8.0, 32.0}) {
    std::vector<double> t, y;
    for (int i = 0; i < static_cast<int>(span * 1000); ++i) {
      t.push_back(0.001 * i);
      y.push_back(1.0 + 0.8 * std::sin(2.0 * M_PI * t.back()));
    }
    EXPECT_NEAR(relative_rise(t, y), -6.0 * 0.8 / (M_PI * span), 2e-3) << span;
  }
}

TEST(RelativeRise, ScaleInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> t, y, y3;
    for (int i = 0; i < 30; ++i) {
      t.push_back(i);
      y.push_back(u(rng));
      y3.push_back(3.0 * y.back());
    }
    EXPECT_NEAR(relative_rise(t, y), relative_rise(t, y3), 1e-9);
  }
}

TEST(SweepTrial, RatesAndControlSource) {
  TrialConfig base;
  base.control = ControlSource::kEstimate;
  SweepSettings s;
  const TrialConfig fast = sweep_trial(base, s, 840.0, true, 0);
  EXPECT_EQ(fast.sensing.est_rate, 840.0);
  EXPECT_EQ(fast.sensing.sensor_rate, 840.0);
  EXPECT_EQ(fast.control, ControlSource::kTrueState);
  EXPECT_EQ(fast.control_rate, 400.0);
  EXPECT_EQ(fast.duration, s.duration);
  EXPECT_EQ(fast.schedule.at(5.0), s.height);
  const TrialConfig slow = sweep_trial(base, s, 50.0, true, 0);
  EXPECT_EQ(slow.control_rate, 50.0);
  EXPECT_EQ(sweep_trial(base, s, 840.0, false, 0).sensing.lowg_noise_std, 0.0);
  EXPECT_NE(sweep_trial(base, s, 840.0, true, 0).seed, sweep_trial(base, s, 840.0, true, 1).seed);
}

TEST(SweepFrequency, ShortRunIsDeterministicAndBinned) {
  TrialConfig base;
  SweepSettings s;
  s.duration = 4.5;
  s.noisy_seeds = 2;
  const SweepResult a = sweep_frequency(base, s, 840.0, 1);
  const SweepResult b = sweep_frequency(base, s, 840.0, 2);
  ASSERT_EQ(a.bins.size(), 45u);
  EXPECT_EQ(a.bins[10].t, 1.0);
  EXPECT_EQ(a.tail_std_pos, b.tail_std_pos);
  EXPECT_EQ(a.growth_pos, b.growth_pos);
  EXPECT_EQ(a.diverged_runs, 0);
  EXPECT_TRUE(std::isfinite(a.tail_std_pos));
  EXPECT_EQ(a.unbounded, a.growth_pos > kUnboundedGrowth);
  EXPECT_EQ(sweep_summary_csv({a}), sweep_summary_csv({b}));
  EXPECT_EQ(sweep_bins_csv({a}), sweep_bins_csv({b}));
}
