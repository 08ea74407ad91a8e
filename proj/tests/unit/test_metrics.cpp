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
#include <random>

#include "hopest/errors.hpp"
#include "hopest/metrics.hpp"
#include "hopest/simulation.hpp"

using namespace hopest;

namespace {

constexpr double kG = 9.81;

// A hop whose estimate is `scale` times the truth.
HopRecord scaled_hop(double t0, double apex, double scale) {
  HopRecord r;
  r.t_TD = t0;
  r.h_desired = apex;
  for (int i = 0; i < 100; ++i) {
    const double z = 0.3 + apex * std::sin(3.14159 * i / 99.0);
    const double v = apex * std::cos(3.14159 * i / 99.0);
    r.z_true.push_back(z);
    r.z_est.push_back(scale * z);
    r.v_true.push_back(v);
    r.v_est.push_back(scale * v);
    r.aerial.push_back(i > 10);
  }
  r.has_true_apex = r.has_est_apex = true;
  r.t_HA_true = r.t_HA = t0 + 0.5;
  r.h_HA_true = apex + 0.3;
  r.h_HA = scale * r.h_HA_true;
  return r;
}

// Contact, a flight from z0 at v0 under net acceleration a_net, then
// contact again; 840 Hz rows.
HopLog flight_log(double z0, double v0, double a_thrust) {
  HopLog log;
  const double dt = 1.0 / 840.0;
  const double a_net = a_thrust - kG;
  const double t_flight = -2.0 * v0 / a_net;
  for (int i = 0;; ++i) {
    const double t = i * dt;
    LogRow r;
    r.t = t;
    if (t < 0.1) {
      r.z_true = z0;
      r.contact = true;
    } else if (t < 0.1 + t_flight) {
      const double tau = t - 0.1;
      r.z_true = z0 + v0 * tau + 0.5 * a_net * tau * tau;
      r.v_true = v0 + a_net * tau;
      r.a_true = a_net;
      r.a_lowg = r.a_highg = a_net + kG;
    } else if (t < 0.3 + t_flight) {
      r.z_true = z0;
      r.contact = true;
    } else {
      break;
    }
    if (r.contact) r.a_lowg = r.a_highg = kG;
    log.rows.push_back(r);
  }
  return log;
}

}  // namespace

TEST(Metrics, PerfectEstimatesScoreZero) {
  std::vector<HopRecord> recs = {scaled_hop(0.0, 1.0, 1.0), scaled_hop(1.0, 2.0, 1.0)};
  const MetricsReport rep = compute_metrics(recs);
  EXPECT_EQ(rep.M1, 0.0);
  EXPECT_EQ(rep.M2, 0.0);
  EXPECT_EQ(rep.M3, 0.0);
  EXPECT_EQ(rep.M4, 0.0);
  EXPECT_NEAR(rep.M5, 0.3, 1e-12);  // true apex 0.3 above desired
  EXPECT_EQ(rep.gamma2, 0.0);
  EXPECT_EQ(rep.gamma3, 0.0);
  EXPECT_EQ(rep.n_apex, 2);
}

TEST(Metrics, ApexMapeExample) {
  std::vector<HopRecord> recs = {scaled_hop(0.0, 1.0, 1.0), scaled_hop(1.0, 1.0, 1.0)};
  for (auto& r : recs) r.h_HA_true = 1.0;
  recs[0].h_HA = 1.1;
  recs[1].h_HA = 0.9;
  const MetricsReport rep = compute_metrics(recs);
  EXPECT_NEAR(rep.M3, 10.0, 1e-12);
  EXPECT_NEAR(rep.gamma1, 0.1, 1e-14);
}

TEST(Metrics, ApexTimeExample) {
  std::vector<HopRecord> recs = {scaled_hop(0.0, 1.0, 1.0)};
  recs[0].t_HA_true = 1.0;
  recs[0].t_HA = 1.05;
  EXPECT_NEAR(compute_metrics(recs).M4, 0.05, 1e-12);
}

TEST(Metrics, NormalizedMaeOfScaledEstimate) {
  // |scale - 1| of the mean absolute truth.
  std::vector<HopRecord> recs = {scaled_hop(0.0, 1.5, 1.1)};
  const MetricsReport rep = compute_metrics(recs);
  EXPECT_NEAR(rep.M1, 10.0, 1e-9);
  EXPECT_NEAR(rep.M2, 10.0, 1e-9);
  double se = 0.0;
  for (double z : recs[0].z_true) se += 0.01 * z * z;
  EXPECT_NEAR(rep.gamma2, std::sqrt(se / 100.0), 1e-12);
}

TEST(Metrics, AerialOnlyDropsStanceSamples) {
  HopRecord r = scaled_hop(0.0, 1.0, 1.0);
  for (size_t i = 0; i < r.z_est.size(); ++i) {
    if (!r.aerial[i]) r.z_est[i] += 5.0;
  }
  std::vector<HopRecord> recs = {r};
  EXPECT_GT(compute_metrics(recs).M1, 1.0);
  EXPECT_EQ(compute_metrics(recs, true).M1, 0.0);
}

TEST(Metrics, ZeroMeanHopExcludedWithDiagnostic) {
  HopRecord flat = scaled_hop(0.0, 1.0, 1.0);
  std::fill(flat.v_true.begin(), flat.v_true.end(), 0.0);
  std::vector<HopRecord> recs = {flat, scaled_hop(1.0, 1.0, 1.2)};
  const MetricsReport rep = compute_metrics(recs);
  EXPECT_NEAR(rep.M2, 20.0, 1e-9);
  EXPECT_FALSE(rep.diagnostics.empty());
}

TEST(Metrics, EmptyInputRejected) {
  EXPECT_THROW(compute_metrics(std::vector<HopRecord>{}), DataError);
}

TEST(Metrics, PermutationInvariant) {
  std::vector<HopRecord> recs;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.8, 1.2);
  for (int i = 0; i < 6; ++i) {
    recs.push_back(scaled_hop(i, 1.0 + i * 0.5, u(rng)));
    recs.back().t_HA += 0.01 * i;
  }
  const MetricsReport a = compute_metrics(recs);
  std::reverse(recs.begin(), recs.end());
  std::swap(recs[1], recs[4]);
  const MetricsReport b = compute_metrics(recs);
  EXPECT_NEAR(a.M1, b.M1, 1e-12);
  EXPECT_NEAR(a.M2, b.M2, 1e-12);
  EXPECT_NEAR(a.M3, b.M3, 1e-12);
  EXPECT_NEAR(a.M4, b.M4, 1e-12);
  EXPECT_NEAR(a.M5, b.M5, 1e-12);
  EXPECT_NEAR(a.gamma2, b.gamma2, 1e-12);
}

TEST(HopRecords, CyclesFromSimulatedTrial) {
  TrialConfig tc;
  tc.duration = 8.0;
  const HopLog log = simulate_trial(tc);
  const auto recs = build_hop_records(log, tc.robot);
  int n_td = 0;
  for (const auto& t : log.true_transitions) n_td += t.kind == TransitionKind::kTouchdown;
  ASSERT_EQ(static_cast<int>(recs.size()), n_td - 1);
  for (const auto& r : recs) {
    EXPECT_EQ(r.z_true.size(), r.z_est.size());
    EXPECT_EQ(r.v_true.size(), r.aerial.size());
    ASSERT_TRUE(r.has_true_apex);
    EXPECT_LT(r.t_TD, r.t_HA_true);
    EXPECT_NEAR(r.h_HA_true, *std::max_element(r.z_true.begin(), r.z_true.end()), 1e-3);
  }
  const MetricsReport rep = compute_metrics(recs);
  EXPECT_GE(rep.M1, 0.0);
  EXPECT_LT(rep.M3, 50.0);
}

TEST(Ground, FlatGroundPerfectEstimatesStayZero) {
  std::vector<GroundSample> s(30, GroundSample{0.0, 2.0});
  for (double h : ground_height_track(s)) EXPECT_EQ(h, 0.0);
}

TEST(Ground, HalfOfTouchdownHeightExample) {
  const std::vector<GroundSample> s = {{0.0, 2.0}, {0.1, 2.1}};
  const auto h = ground_height_track(s);
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h[0], 0.0);
  EXPECT_NEAR(h[1], 0.05, 1e-15);
}

TEST(Ground, TerrainStepTrackedWithinOneHop) {
  // Position re-zeroes at every touchdown, so after landing 0.2 m higher
  // the apex reads 0.2 m lower and later touchdowns read zero.
  const double H = 3.0;
  std::vector<GroundSample> s = {{0.0, H}, {0.0, H}, {0.2, H}};
  for (int i = 0; i < 5; ++i) s.push_back({0.0, H - 0.2});
  const auto h = ground_height_track(s);
  EXPECT_NEAR(h[1], 0.0, 1e-15);
  for (size_t i = 2; i < h.size(); ++i) EXPECT_NEAR(h[i], 0.2, 1e-12) << i;
}

TEST(Ground, SamplesPairTouchdownWithPreviousApex) {
  std::vector<HopRecord> recs(3);
  for (int i = 0; i < 3; ++i) {
    recs[i].h_TD = 0.01 * i;
    recs[i].h_HA = 1.0 + i;
    recs[i].has_est_apex = true;
  }
  const auto s = ground_samples(recs);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].h_TD, 0.01);
  EXPECT_EQ(s[0].h_HA, 1.0);
  EXPECT_EQ(s[1].h_HA, 2.0);
}

TEST(Agility, BallisticClosedForm) {
  AgilityInputs a;
  a.beta = 0;
  const double nv = std::sqrt(2.0 * kG * 1.0) / 2.0;
  EXPECT_NEAR(nv, 2.2147, 1e-4);
  EXPECT_NEAR(agility(a).nu_vja, nv, 1e-12);
  EXPECT_NEAR(agility(a).nu_ha, nv, 1e-12);
  a.beta = 1;
  EXPECT_NEAR(agility(a).nu_uha, nv, 1e-12);
}

TEST(Agility, BetaSelectsFamily) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> h(0.2, 5.0), t(0.0, 0.2), gam(-1.0, 0.9),
      loss(0.0, 0.5), z(0.5, 1.5);
  int checked = 0;
  for (int i = 0; i < 10000; ++i) {
    AgilityInputs a;
    a.h1 = h(rng);
    a.h0 = h(rng);
    a.t_s = t(rng);
    a.gamma_r = gam(rng);
    a.gamma_d = gam(rng);
    a.gamma_lr = loss(rng);
    a.gamma_ld = loss(rng);
    a.zeta_s = z(rng);
    if (1.0 - a.gamma_d - a.gamma_ld <= 0.0) continue;
    const double t_r = std::sqrt(2.0 * a.h1 / (kG * (1.0 - a.gamma_r + a.gamma_lr)));
    const double t_d = std::sqrt(2.0 * a.h0 / (kG * (1.0 - a.gamma_d - a.gamma_ld)));
    a.beta = 0;
    const AgilityResult r0 = agility(a);
    EXPECT_NEAR(r0.nu_uha, a.h1 / (a.t_s + t_r), 1e-12);
    EXPECT_EQ(r0.nu_uha, r0.nu_vja);
    a.beta = 1;
    const AgilityResult r1 = agility(a);
    EXPECT_NEAR(r1.nu_uha, (a.h1 + a.h0) / (a.t_s + t_r + t_d), 1e-12);
    EXPECT_EQ(r1.nu_uha, r1.nu_ha);
    ++checked;
  }
  EXPECT_GT(checked, 5000);
}

TEST(Agility, ImpliedPreviousHeight) {
  AgilityInputs a;
  a.h1 = 2.7;
  EXPECT_NEAR(agility(a).h0_implied, 2.7, 1e-15);
  a.zeta_s = 0.9;
  a.gamma_r = 0.2;
  a.gamma_ld = 0.1;
  EXPECT_NEAR(agility(a).h0_implied, 0.81 * 2.7 * 0.8 / 0.9, 1e-12);
}

TEST(Agility, RejectsInvalidInputs) {
  AgilityInputs a;
  a.gamma_d = 0.7;
  a.gamma_ld = 0.4;
  EXPECT_THROW(agility(a), ConfigError);
  a = AgilityInputs{};
  a.gamma_r = 1.0;
  EXPECT_THROW(agility(a), ConfigError);
  a = AgilityInputs{};
  a.beta = 2;
  EXPECT_THROW(agility(a), ConfigError);
  a = AgilityInputs{};
  a.zeta_s = 0.0;
  EXPECT_THROW(agility(a), ConfigError);
  EXPECT_THROW(agility_direct(1.0, 0.0, 1.0), ConfigError);
}

TEST(Agility, MeasuredPlatformRows) {
  struct Row { double h, ta, tc, vja, ha; };
  for (const Row& r : {Row{1.008, 0.58, 1.03, 1.75, 1.96}, Row{1.63, 0.71, 1.37, 2.30, 2.37},
                       Row{3.92, 1.58, 2.60, 2.47, 3.01}}) {
    const DirectAgility d = agility_direct(r.h, r.ta, r.tc);
    EXPECT_NEAR(d.nu_vja, r.vja, 0.02) << r.h;
    EXPECT_NEAR(d.nu_ha, r.ha, 0.02) << r.h;
    EXPECT_DOUBLE_EQ(d.nu_vja, r.h / r.ta);
    EXPECT_DOUBLE_EQ(d.nu_ha, 2.0 * r.h / r.tc);
  }
}

TEST(Baselines, BallisticExactOnBallisticFlight) {
  const HopLog log = flight_log(0.3, 4.0, 0.0);
  const HopLog ba = baseline_estimates(log, BaselineKind::kBa1);
  for (size_t i = 0; i < log.rows.size(); ++i) {
    EXPECT_NEAR(ba.rows[i].z_est, log.rows[i].z_true, 1e-9) << i;
    EXPECT_NEAR(ba.rows[i].v_est, log.rows[i].v_true, 1e-9) << i;
  }
}

TEST(Baselines, BallisticGapUnderConstantThrust) {
  const double a = 3.0, v0 = 4.0, z0 = 0.3;
  const HopLog log = flight_log(z0, v0, a);
  const HopLog ba = baseline_estimates(log, BaselineKind::kBa1);
  const double t_r = v0 / (kG - a);
  size_t apex = 0;
  for (size_t i = 1; i < log.rows.size(); ++i) {
    if (!log.rows[i].contact && log.rows[i].z_true > log.rows[apex].z_true) apex = i;
  }
  const double tau = log.rows[apex].t - log.rows[0].t - 0.1;
  EXPECT_NEAR(tau, t_r, 1.0 / 840.0);
  EXPECT_NEAR(log.rows[apex].z_true - ba.rows[apex].z_est, 0.5 * a * tau * tau, 1e-9);
  EXPECT_NEAR(0.5 * a * tau * tau, 0.5 * a * t_r * t_r, 0.01);
}

TEST(Baselines, DeadReckoningFollowsThrustedFlight) {
  const HopLog log = flight_log(0.3, 4.0, 3.0);
  const HopLog dr = baseline_estimates(log, BaselineKind::kDr1);
  double worst = 0.0;
  for (size_t i = 0; i < log.rows.size(); ++i) {
    worst = std::max(worst, std::abs(dr.rows[i].z_est - log.rows[i].z_true));
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(Baselines, Kf3SnapsToContactHeightAtTouchdown) {
  TrialConfig tc;
  tc.schedule = HeightSchedule::constant(2.0);
  tc.duration = 6.0;
  const HopLog log = simulate_trial(tc);
  const HopLog kf3 = baseline_estimates(log, BaselineKind::kKf3);
  int n = 0;
  for (const auto& r : kf3.rows) {
    if (r.event != TransitionKind::kTouchdown) continue;
    EXPECT_NEAR(r.z_est, -compute_lf(tc.robot), 0.02) << r.t;
    ++n;
  }
  EXPECT_GE(n, 3);
}

TEST(Baselines, MissingEventsRejected) {
  HopLog log;
  for (int i = 0; i < 100; ++i) {
    LogRow r;
    r.t = i / 840.0;
    r.z_true = 2.0 - 0.5 * kG * r.t * r.t;
    log.rows.push_back(r);
  }
  EXPECT_THROW(baseline_estimates(log, BaselineKind::kBa1), DataError);
  EXPECT_THROW(baseline_estimates(log, BaselineKind::kKf3), DataError);
}

TEST(OpticalFlow, IdentityProxy) {
  EXPECT_EQ(optical_flow_error_proxy(19.0), 19.0);
  EXPECT_EQ(optical_flow_error_proxy(0.0), 0.0);
  EXPECT_EQ(optical_flow_error_proxy(50.0), 50.0);
  EXPECT_THROW(optical_flow_error_proxy(-1.0), ConfigError);
}
