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

#include "hopest/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "hopest/errors.hpp"
#include "hopest/hop_log.hpp"
#include "hopest/parallel.hpp"

namespace hopest {
namespace {

struct Moments {
  double n = 0.0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    n += 1.0;
    sum += x;
    sum_sq += x * x;
  }
  double mean() const { return n > 0.0 ? sum / n : 0.0; }
  double std() const {
    if (n <= 0.0) return 0.0;
    const double m = mean();
    return std::sqrt(std::max(0.0, sum_sq / n - m * m));
  }
};

SweepResult aggregate(double frequency, const SweepSettings& s,
                      const std::vector<HopLog>& noisy, const HopLog& clean,
                      int diverged) {
  const int n_bins = static_cast<int>(std::ceil(s.duration / s.bin - 1e-9));
  std::vector<Moments> pos(n_bins), vel(n_bins), pos_c(n_bins), vel_c(n_bins);
  auto bin_of = [&](double t) {
    return std::clamp(static_cast<int>(std::floor(t / s.bin + 1e-9)), 0, n_bins - 1);
  };
  Moments tail_p, tail_v, early_p, early_v;
  const double tail_start = s.duration - s.tail;
  for (const HopLog& log : noisy) {
    for (const LogRow& r : log.rows) {
      const double ep = r.z_est - r.z_true;
      const double ev = r.v_est - r.v_true;
      const int b = bin_of(r.t);
      pos[b].add(ep);
      vel[b].add(ev);
      if (r.t >= tail_start) {
        tail_p.add(ep);
        tail_v.add(ev);
      }
      if (r.t >= s.tail && r.t < 2.0 * s.tail) {
        early_p.add(ep);
        early_v.add(ev);
      }
    }
  }
  for (const LogRow& r : clean.rows) {
    const int b = bin_of(r.t);
    pos_c[b].add(r.z_est - r.z_true);
    vel_c[b].add(r.v_est - r.v_true);
  }

  SweepResult out;
  out.frequency = frequency;
  for (int b = 0; b < n_bins; ++b) {
    SweepBin bin;
    bin.t = b * s.bin;
    bin.n = static_cast<int>(pos[b].n);
    bin.mean_pos = pos[b].mean();
    bin.std_pos = pos[b].std();
    bin.mean_vel = vel[b].mean();
    bin.std_vel = vel[b].std();
    bin.mean_pos_clean = pos_c[b].mean();
    bin.mean_vel_clean = vel_c[b].mean();
    out.bins.push_back(bin);
  }
  out.tail_std_pos = tail_p.std();
  out.tail_std_vel = tail_v.std();
  out.early_std_pos = early_p.std();
  out.early_std_vel = early_v.std();
  std::vector<double> ts, sp, sv;
  for (const SweepBin& b : out.bins) {
    if (b.t < s.tail || b.n == 0) continue;
    ts.push_back(b.t);
    sp.push_back(b.std_pos);
    sv.push_back(b.std_vel);
  }
  out.growth_pos = relative_rise(ts, sp);
  out.growth_vel = relative_rise(ts, sv);
  out.unbounded = out.growth_pos > kUnboundedGrowth;
  out.diverged_runs = diverged;
  if (diverged > 0) {
    out.tail_std_pos = out.tail_std_vel = INFINITY;
    out.growth_pos = out.growth_vel = INFINITY;
    out.unbounded = true;
  }
  if (!noisy.empty()) {
    for (const auto& tr : noisy.front().true_transitions) {
      if (tr.kind == TransitionKind::kTouchdown && tr.t >= tail_start) ++out.late_touchdowns;
    }
  }
  return out;
}

}  // namespace

double relative_rise(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t n = std::min(t.size(), y.size());
  if (n < 2) return 0.0;
  double mt = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mt += t[i];
    my += y[i];
  }
  mt /= n;
  my /= n;
  double sty = 0.0, stt = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sty += (t[i] - mt) * (y[i] - my);
    stt += (t[i] - mt) * (t[i] - mt);
  }
  if (stt <= 0.0 || my == 0.0) return 0.0;
  const auto [lo, hi] = std::minmax_element(t.begin(), t.begin() + n);
  return sty / stt * (*hi - *lo) / my;
}

TrialConfig sweep_trial(const TrialConfig& base, const SweepSettings& s,
                        double frequency, bool noisy, int seed_index) {
  TrialConfig t = base;
  t.sensing.sensor_rate = frequency;
  t.sensing.est_rate = frequency;
  if (!noisy) t.sensing = t.sensing.noiseless();
  t.control = ControlSource::kTrueState;
  t.control_rate = std::min(s.control_rate, frequency);
  t.schedule = HeightSchedule::constant(s.height);
  t.duration = s.duration;
  t.seed = base.seed + static_cast<std::uint64_t>(seed_index);
  return t;
}

std::vector<SweepResult> run_sweep(const TrialConfig& base,
                                   const SweepSettings& s, int threads) {
  const int per_freq = s.noisy_seeds + 1;
  const int n_freq = static_cast<int>(s.frequencies.size());
  std::vector<std::optional<HopLog>> logs(static_cast<size_t>(n_freq * per_freq));
  parallel_for(n_freq * per_freq, threads, [&](int k) {
    const double f = s.frequencies[k / per_freq];
    const int j = k % per_freq;
    // Slot 0 of each frequency is the noiseless run.
    try {
      logs[k] = simulate_trial(sweep_trial(base, s, f, j > 0, j > 0 ? j - 1 : 0));
    } catch (const FilterFault&) {
      logs[k].reset();
    }
  });
  std::vector<SweepResult> out;
  for (int i = 0; i < n_freq; ++i) {
    const auto first = logs.begin() + i * per_freq;
    std::vector<HopLog> noisy;
    int diverged = 0;
    for (auto it = first + 1; it != first + per_freq; ++it) {
      if (*it) {
        noisy.push_back(**it);
      } else {
        ++diverged;
      }
    }
    const HopLog clean = *first ? **first : HopLog{};
    out.push_back(aggregate(s.frequencies[i], s, noisy, clean, diverged));
  }
  return out;
}

SweepResult sweep_frequency(const TrialConfig& base, const SweepSettings& s,
                            double frequency, int threads) {
  SweepSettings one = s;
  one.frequencies = {frequency};
  return run_sweep(base, one, threads).front();
}

std::string sweep_bins_csv(const std::vector<SweepResult>& results) {
  std::ostringstream os;
  os << "frequency,t,n,mean_pos,std_pos,mean_vel,std_vel,mean_pos_clean,"
        "mean_vel_clean\n";
  for (const auto& r : results) {
    for (const auto& b : r.bins) {
      os << format_double(r.frequency) << ',' << format_double(b.t) << ','
         << b.n << ',' << format_double(b.mean_pos) << ','
         << format_double(b.std_pos) << ',' << format_double(b.mean_vel) << ','
         << format_double(b.std_vel) << ',' << format_double(b.mean_pos_clean)
         << ',' << format_double(b.mean_vel_clean) << '\n';
    }
  }
  return os.str();
}

std::string sweep_summary_csv(const std::vector<SweepResult>& results) {
  std::ostringstream os;
  os << "frequency,tail_std_pos,tail_std_vel,early_std_pos,early_std_vel,"
        "growth_pos,growth_vel,unbounded,late_touchdowns,diverged_runs\n";
  for (const auto& r : results) {
    os << format_double(r.frequency) << ',' << format_double(r.tail_std_pos)
       << ',' << format_double(r.tail_std_vel) << ','
       << format_double(r.early_std_pos) << ','
       << format_double(r.early_std_vel) << ',' << format_double(r.growth_pos)
       << ',' << format_double(r.growth_vel) << ',' << (r.unbounded ? 1 : 0)
       << ',' << r.late_touchdowns << ',' << r.diverged_runs << '\n';
  }
  return os.str();
}

}  // namespace hopest
