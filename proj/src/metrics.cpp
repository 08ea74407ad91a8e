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

#include "hopest/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hopest/errors.hpp"
#include "hopest/replay.hpp"
#include "hopest/sensing.hpp"

namespace hopest {

namespace {

size_t row_at(const HopLog& log, double t) {
  const auto it = std::lower_bound(
      log.rows.begin(), log.rows.end(), t,
      [](const LogRow& r, double tt) { return r.t < tt; });
  return static_cast<size_t>(it - log.rows.begin());
}

bool row_contact(const HopLog& log, const LogRow& r, const RobotParams& rp) {
  return log.has_contact ? r.contact : r.z_true <= rp.contact_height();
}

}  // namespace

std::vector<HopRecord> build_hop_records(const HopLog& log,
                                         const RobotParams& rp) {
  const auto tt = detect_true_transitions(log, rp);
  std::vector<size_t> td_rows;
  std::vector<TrueTransition> apexes;
  for (const auto& tr : tt) {
    if (tr.kind == TransitionKind::kTouchdown) td_rows.push_back(row_at(log, tr.t));
    if (tr.kind == TransitionKind::kApex) apexes.push_back(tr);
  }
  std::vector<HopRecord> out;
  for (size_t k = 0; k + 1 < td_rows.size(); ++k) {
    const size_t a = td_rows[k];
    const size_t b = td_rows[k + 1];
    HopRecord rec;
    rec.t_TD = log.rows[a].t;
    rec.h_TD = log.rows[a].z_est - rp.contact_height();
    rec.h_desired = log.rows[a].h_desired;
    for (const auto& ap : apexes) {
      if (ap.t > rec.t_TD && ap.t < log.rows[b].t) {
        rec.has_true_apex = true;
        rec.t_HA_true = ap.t;
        rec.h_HA_true = ap.z;
        rec.h_desired = log.rows[row_at(log, ap.t)].h_desired;
        break;
      }
    }
    for (size_t i = a; i < b; ++i) {
      const LogRow& r = log.rows[i];
      rec.z_true.push_back(r.z_true);
      rec.z_est.push_back(r.z_est);
      rec.v_true.push_back(r.v_true);
      rec.v_est.push_back(r.v_est);
      rec.aerial.push_back(is_aerial(r.phase));
      if (!rec.has_est_apex && i > a && r.event == TransitionKind::kApex) {
        rec.has_est_apex = true;
        rec.t_HA = r.t;
        rec.h_HA = r.z_est;
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

MetricsReport compute_metrics(std::span<const HopRecord> records,
                              bool aerial_only) {
  MetricsReport rep;
  double m1 = 0.0, m2 = 0.0;
  int n1 = 0, n2 = 0;
  double se_z = 0.0, se_v = 0.0;
  long long n_samples = 0;
  double ape = 0.0, ate = 0.0, ade = 0.0;
  int n_ape = 0, n_ade = 0;

  for (size_t h = 0; h < records.size(); ++h) {
    const HopRecord& r = records[h];
    double abs_z = 0.0, abs_v = 0.0, mean_z = 0.0, mean_v = 0.0;
    int n = 0;
    for (size_t i = 0; i < r.z_true.size(); ++i) {
      if (aerial_only && !r.aerial[i]) continue;
      const double ez = r.z_est[i] - r.z_true[i];
      const double ev = r.v_est[i] - r.v_true[i];
      abs_z += std::abs(ez);
      abs_v += std::abs(ev);
      mean_z += std::abs(r.z_true[i]);
      mean_v += std::abs(r.v_true[i]);
      se_z += ez * ez;
      se_v += ev * ev;
      ++n;
    }
    n_samples += n;
    if (n < 2) {
      rep.diagnostics.push_back("hop " + std::to_string(h) +
                                " has fewer than 2 samples; excluded");
    } else {
      if (mean_z > 1e-12) {
        m1 += abs_z / mean_z;
        ++n1;
      } else {
        rep.diagnostics.push_back("hop " + std::to_string(h) +
                                  " has zero mean height; excluded from M1");
      }
      if (mean_v > 1e-12) {
        m2 += abs_v / mean_v;
        ++n2;
      } else {
        rep.diagnostics.push_back("hop " + std::to_string(h) +
                                  " has zero mean speed; excluded from M2");
      }
    }
    if (r.has_true_apex) {
      ade += std::abs(r.h_HA_true - r.h_desired);
      ++n_ade;
      if (r.has_est_apex) {
        ape += std::abs((r.h_HA - r.h_HA_true) / r.h_HA_true);
        ate += std::abs(r.t_HA - r.t_HA_true);
        ++n_ape;
      } else {
        rep.diagnostics.push_back("hop " + std::to_string(h) +
                                  " has no detected apex");
      }
    }
  }
  if (n1 == 0 && n2 == 0) {
    throw DataError("metrics need at least one hop with two samples");
  }
  rep.n_hops = static_cast<int>(records.size());
  rep.n_apex = n_ape;
  rep.M1 = n1 ? 100.0 * m1 / n1 : 0.0;
  rep.M2 = n2 ? 100.0 * m2 / n2 : 0.0;
  rep.gamma1 = n_ape ? ape / n_ape : 0.0;
  rep.M3 = 100.0 * rep.gamma1;
  rep.M4 = n_ape ? ate / n_ape : 0.0;
  rep.M5 = n_ade ? ade / n_ade : 0.0;
  rep.gamma2 = n_samples ? std::sqrt(se_z / n_samples) : 0.0;
  rep.gamma3 = n_samples ? std::sqrt(se_v / n_samples) : 0.0;
  const auto samples = ground_samples(records);
  rep.h_g = ground_height_track(samples);
  return rep;
}

std::vector<GroundSample> ground_samples(std::span<const HopRecord> records) {
  std::vector<GroundSample> out;
  for (size_t n = 1; n < records.size(); ++n) {
    if (!records[n - 1].has_est_apex) continue;
    out.push_back({records[n].h_TD, records[n - 1].h_HA});
  }
  return out;
}

std::vector<double> ground_height_track(std::span<const GroundSample> hops) {
  std::vector<double> h_g;
  if (hops.empty()) return h_g;
  h_g.push_back(0.0);
  for (size_t n = 1; n < hops.size(); ++n) {
    const double drop_prev = hops[n - 1].h_HA - hops[n - 1].h_TD;
    const double drop = hops[n].h_HA - hops[n].h_TD;
    const double dh1 = drop_prev - drop;
    const double dh2 = hops[n].h_TD;
    h_g.push_back(h_g.back() + 0.5 * (dh1 + dh2));
  }
  return h_g;
}

void AgilityInputs::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("agility: " + what); };
  if (!(h1 > 0.0)) fail("h1 must be positive");
  if (!(h0 > 0.0)) fail("h0 must be positive");
  if (!(t_s >= 0.0)) fail("t_s must be non-negative");
  if (!(g > 0.0)) fail("g must be positive");
  if (!(gamma_r < 1.0) || !(gamma_d < 1.0)) fail("thrust ratios must be below 1");
  if (!(gamma_lr >= 0.0) || !(gamma_ld >= 0.0)) fail("loss ratios must be non-negative");
  if (!(zeta_s > 0.0)) fail("zeta_s must be positive");
  if (beta != 0 && beta != 1) fail("beta must be 0 or 1");
  if (!(1.0 - gamma_r + gamma_lr > 0.0)) fail("rebound deceleration must be positive");
  if (!(1.0 - gamma_d - gamma_ld > 0.0)) fail("drop acceleration must be positive");
}

AgilityResult agility(const AgilityInputs& a) {
  a.validate();
  const double k_r = 1.0 - a.gamma_r + a.gamma_lr;
  const double k_d = 1.0 - a.gamma_d - a.gamma_ld;
  AgilityResult r;
  r.t_r = std::sqrt(2.0 * a.h1 / (a.g * k_r));
  r.t_d = std::sqrt(2.0 * a.h0 / (a.g * k_d));
  r.nu_vja = a.h1 / (a.t_s + r.t_r);
  r.nu_ha = (a.h1 + a.h0) / (a.t_s + r.t_r + r.t_d);
  const double b = a.beta;
  r.nu_uha = (a.h1 + b * a.h0) / (a.t_s + r.t_r + b * r.t_d);
  r.h0_implied = a.zeta_s * a.zeta_s * a.h1 * k_r / k_d;
  return r;
}

DirectAgility agility_direct(double h1, double t_apogee, double t_cycle) {
  if (!(h1 > 0.0) || !(t_apogee > 0.0) || !(t_cycle > 0.0)) {
    throw ConfigError("agility: height and times must be positive");
  }
  return {h1 / t_apogee, 2.0 * h1 / t_cycle};
}

std::string_view to_string(BaselineKind k) {
  switch (k) {
    case BaselineKind::kBa1: return "BA1";
    case BaselineKind::kDr1: return "DR1";
    case BaselineKind::kKf3: return "KF3";
  }
  return "";
}

HopLog baseline_estimates(const HopLog& log, BaselineKind kind,
                          const EstimatorConfig& kf3_base) {
  const RobotParams& rp = kf3_base.robot;
  const auto tt = detect_true_transitions(log, rp);
  const bool has_lo = std::any_of(tt.begin(), tt.end(), [](const auto& t) {
    return t.kind == TransitionKind::kLiftoff;
  });
  const bool has_td = std::any_of(tt.begin(), tt.end(), [](const auto& t) {
    return t.kind == TransitionKind::kTouchdown;
  });
  if (!has_lo || !has_td) {
    throw DataError(std::string("baseline ") + std::string(to_string(kind)) +
                    " needs touchdown and liftoff events");
  }
  if (kind == BaselineKind::kKf3) {
    EstimatorConfig cfg = kf3_base;
    cfg.kind = FilterKind::kKf1;
    cfg.imupts = imupt_bit(ImuptKind::kPositionTd);
    return replay(log, cfg);
  }

  HopLog out = log;
  const double g = rp.gravity;
  bool flying = false;  // propagating from a liftoff state
  bool apex_marked = false;
  double z = 0.0, v = 0.0, t_lo = 0.0, z_lo = 0.0, v_lo = 0.0;
  for (size_t i = 0; i < out.rows.size(); ++i) {
    LogRow& r = out.rows[i];
    const bool contact = row_contact(log, log.rows[i], rp);
    const bool was_contact = i > 0 && row_contact(log, log.rows[i - 1], rp);
    r.event.reset();
    if (contact) {
      flying = false;
      z = r.z_true;
      v = r.v_true;
    } else if (was_contact || (!flying && i == 0)) {
      // Liftoff (or the first row): state from the leg encoder and truth.
      flying = was_contact;
      apex_marked = false;
      z = z_lo = r.z_true;
      v = v_lo = r.v_true;
      t_lo = r.t;
    } else if (!flying) {
      z = r.z_true;
      v = r.v_true;
    } else if (kind == BaselineKind::kBa1) {
      const double tau = r.t - t_lo;
      z = z_lo + v_lo * tau - 0.5 * g * tau * tau;
      v = v_lo - g * tau;
    } else {
      const double dt = r.t - log.rows[i - 1].t;
      const ImuSample s{r.t, r.a_lowg, r.a_highg};
      const double u = select_accel(s, kf3_base.params.g_switch, g) - g;
      z += v * dt + 0.5 * u * dt * dt;
      v += u * dt;
    }
    if (flying && !apex_marked && v <= 0.0) {
      r.event = TransitionKind::kApex;
      apex_marked = true;
    }
    r.z_est = z;
    r.v_est = v;
    r.P00 = r.P01 = r.P11 = 0.0;
  }
  return out;
}

double optical_flow_error_proxy(double m1_percent) {
  if (m1_percent < 0.0) throw ConfigError("M1 must be non-negative");
  return m1_percent;
}

}  // namespace hopest
