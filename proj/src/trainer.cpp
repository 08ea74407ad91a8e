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

#include "hopest/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hopest/errors.hpp"
#include "hopest/parallel.hpp"
#include "hopest/replay.hpp"

namespace hopest {

namespace {

size_t row_at(const HopLog& log, double t) {
  const auto it = std::lower_bound(
      log.rows.begin(), log.rows.end(), t,
      [](const LogRow& r, double tt) { return r.t < tt; });
  return static_cast<size_t>(it - log.rows.begin());
}

double median_of(std::vector<double> v) {
  const size_t n = v.size();
  std::sort(v.begin(), v.end());
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Rng stream_rng(std::uint64_t seed, std::uint64_t generation,
               std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(generation),
                    static_cast<std::uint32_t>(generation >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

void Dataset::add_source(HopLog log, double margin, const RobotParams& rp) {
  const auto ranges = hop_ranges(log, margin, rp);
  const std::size_t src = sources.size();
  for (const auto& [a, b] : ranges) {
    hops.push_back({src, a, b, log.rows[a].h_desired});
  }
  sources.push_back(std::make_shared<const HopLog>(std::move(log)));
}

CostBreakdown evaluate_cost(const EstimatorParams& params, const Dataset& ds,
                            FilterKind kind, const EstimatorConfig& base) {
  EstimatorConfig cfg = base;
  cfg.kind = kind;
  cfg.params = params;

  // Hops grouped by source, in row order.
  std::vector<std::vector<const HopRef*>> by_source(ds.sources.size());
  for (const HopRef& h : ds.hops) by_source.at(h.source).push_back(&h);
  for (auto& v : by_source) {
    std::sort(v.begin(), v.end(),
              [](const HopRef* a, const HopRef* b) { return a->begin < b->begin; });
  }

  CostBreakdown c;
  c.counts_match = true;
  double ape = 0.0;
  int n_pairs = 0;
  double se_z = 0.0, se_v = 0.0;
  long long n_samples = 0;
  std::vector<double> true_apex, est_apex;
  try {
    for (std::size_t s = 0; s < ds.sources.size(); ++s) {
      const auto& hops = by_source[s];
      if (hops.empty()) continue;
      const HopLog& log = *ds.sources[s];
      std::size_t stop = 0;
      for (const HopRef* h : hops) stop = std::max(stop, h->end);

      // Per-row estimate of the replay, then scoring per hop.
      std::vector<double> z(stop), v(stop);
      std::vector<char> apex(stop, 0);
      std::size_t i = 0;
      replay_rows(log, 0, stop, cfg,
                  [&](const LogRow&, const TickOutput& t, const FilterState& fs) {
                    z[i] = fs.z();
                    v[i] = fs.v();
                    apex[i] = t.event == TransitionKind::kApex;
                    ++i;
                  });
      const auto truth = detect_true_transitions(log, base.robot);
      for (const HopRef* h : hops) {
        const double t0 = log.rows[h->begin].t;
        const double t1 = log.rows[h->end - 1].t;
        true_apex.clear();
        est_apex.clear();
        // Detections before the hop's touchdown belong to the previous apex.
        double t_td = t1;
        for (const auto& tr : truth) {
          if (tr.kind == TransitionKind::kApex && tr.t > t0 && tr.t <= t1) {
            true_apex.push_back(tr.z);
          }
          if (tr.kind == TransitionKind::kTouchdown && tr.t > t0 && t_td == t1) {
            t_td = tr.t;
          }
        }
        for (std::size_t r = h->begin; r < h->end; ++r) {
          if (apex[r] && log.rows[r].t > t_td) est_apex.push_back(z[r]);
          const double ez = z[r] - log.rows[r].z_true;
          const double ev = v[r] - log.rows[r].v_true;
          se_z += ez * ez;
          se_v += ev * ev;
          ++n_samples;
        }
        c.n_HA += static_cast<int>(true_apex.size());
        c.n_HA_est += static_cast<int>(est_apex.size());
        if (true_apex.size() != est_apex.size()) c.counts_match = false;
        const std::size_t n = std::min(true_apex.size(), est_apex.size());
        for (std::size_t k = 0; k < n; ++k) {
          ape += std::abs((est_apex[k] - true_apex[k]) / true_apex[k]);
          ++n_pairs;
        }
      }
    }
  } catch (const FilterFault&) {
    c.L_c = kFailureCost;
    c.counts_match = false;
    return c;
  }
  if (c.n_HA == 0) throw DataError("dataset contains no true apex");
  c.gamma1 = n_pairs ? ape / n_pairs : 0.0;
  c.gamma2 = n_samples ? std::sqrt(se_z / n_samples) : 0.0;
  c.gamma3 = n_samples ? std::sqrt(se_v / n_samples) : 0.0;
  c.L_c = c.counts_match ? kApexWeight * c.gamma1
                         : kTrajectoryWeight * c.gamma2 +
                               kTrajectoryWeight * c.gamma3;
  if (!std::isfinite(c.L_c) || c.L_c > kFailureCost) c.L_c = kFailureCost;
  return c;
}

std::vector<std::pair<std::size_t, std::size_t>> hop_ranges(
    const HopLog& log, double margin, const RobotParams& rp) {
  const auto transitions = detect_true_transitions(log, rp);
  std::vector<double> apex_t;
  // A log that opens in the drop starts its first hop at the first row.
  if (!transitions.empty() && transitions.front().kind == TransitionKind::kTouchdown &&
      !log.rows.empty()) {
    apex_t.push_back(log.t_begin());
  }
  for (const auto& tr : transitions) {
    if (tr.kind == TransitionKind::kApex) apex_t.push_back(tr.t);
  }
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t k = 0; k + 1 < apex_t.size(); ++k) {
    const double t_stop = apex_t[k + 1] + margin;
    if (t_stop > log.t_end()) break;
    out.emplace_back(row_at(log, apex_t[k]), row_at(log, t_stop));
  }
  return out;
}

HopLog extract_hop(const Dataset& ds, const HopRef& hop) {
  const HopLog& log = *ds.sources.at(hop.source);
  HopLog out;
  out.est_rate = log.est_rate;
  out.has_contact = log.has_contact;
  out.rows.assign(log.rows.begin() + static_cast<std::ptrdiff_t>(hop.begin),
                  log.rows.begin() + static_cast<std::ptrdiff_t>(hop.end));
  for (const auto& tr : log.true_transitions) {
    if (tr.t >= out.t_begin() && tr.t <= out.t_end()) {
      out.true_transitions.push_back(tr);
    }
  }
  return out;
}

Dataset stratified_subset(const Dataset& ds,
                          const std::map<double, int>& per_height,
                          std::uint64_t seed) {
  std::map<double, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < ds.hops.size(); ++i) {
    groups[ds.hops[i].height].push_back(i);
  }
  std::ostringstream shortfall;
  std::vector<std::size_t> chosen;
  std::uint64_t stream = 0;
  for (const auto& [h, n] : per_height) {
    ++stream;
    if (n < 0) throw ConfigError("negative hop count requested");
    const auto it = groups.find(h);
    const std::size_t have = it == groups.end() ? 0 : it->second.size();
    if (static_cast<std::size_t>(n) > have) {
      shortfall << " h=" << h << " wants " << n << " has " << have << ';';
      continue;
    }
    if (n == 0) continue;
    std::vector<std::size_t> pick = it->second;
    if (static_cast<std::size_t>(n) < have) {
      Rng rng = stream_rng(seed, 0, stream);
      std::shuffle(pick.begin(), pick.end(), rng);
      pick.resize(static_cast<std::size_t>(n));
    }
    chosen.insert(chosen.end(), pick.begin(), pick.end());
  }
  if (!shortfall.str().empty()) {
    throw DataError("not enough hops:" + shortfall.str());
  }
  std::sort(chosen.begin(), chosen.end());
  Dataset out;
  out.sources = ds.sources;
  for (std::size_t i : chosen) out.hops.push_back(ds.hops[i]);
  return out;
}

Dataset synthesize_dataset(const SynthesisSpec& spec) {
  Dataset ds;
  for (std::size_t hi = 0; hi < spec.heights.size(); ++hi) {
    int have = 0;
    for (std::uint64_t k = 0; have < spec.hops_per_height; ++k) {
      if (k > 1000) throw DataError("simulation produced no usable hops");
      TrialConfig tc = spec.trial;
      tc.schedule = HeightSchedule::constant(spec.heights[hi]);
      tc.duration = spec.trial_duration;
      tc.seed = stream_rng(spec.seed, hi, k)();
      const std::size_t before = ds.hops.size();
      ds.add_source(simulate_trial(tc), 0.2, tc.robot);
      const int added = static_cast<int>(ds.hops.size() - before);
      const int keep = std::min(added, spec.hops_per_height - have);
      ds.hops.resize(before + static_cast<std::size_t>(keep));
      have += keep;
    }
  }
  return ds;
}

void GaConfig::validate() const {
  if (population < 2) throw ConfigError("GA population must be at least 2");
  if (generations < 1) throw ConfigError("GA generations must be at least 1");
  for (double f : {elite_frac, crossover_frac, mutation_frac}) {
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("GA fractions must lie in [0, 1]");
  }
  if (elite_frac + crossover_frac + mutation_frac > 1.0 + 1e-9) {
    throw ConfigError("GA fractions sum above 1");
  }
  if (!(alpha0 > 0.0)) throw ConfigError("GA alpha0 must be positive");
  for (const auto& b : bounds) {
    if (!(b.hi > b.lo)) throw ConfigError("GA bounds must have hi > lo");
  }
}

std::vector<double> rank_weights(std::span<const double> costs) {
  const size_t n = costs.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return costs[a] < costs[b]; });
  std::vector<double> w(n, 2.0);
  if (n < 2) return w;
  for (size_t r = 0; r < n; ++r) {
    w[order[r]] = 2.0 - static_cast<double>(r) / static_cast<double>(n - 1);
  }
  return w;
}

std::vector<int> sus_select(std::span<const double> weights, int n_parents,
                            Rng& rng) {
  std::vector<int> out;
  if (weights.empty() || n_parents <= 0) return out;
  double total = 0.0;
  for (double w : weights) total += w;
  std::vector<double> w(weights.begin(), weights.end());
  if (!(total > 0.0)) {
    std::fill(w.begin(), w.end(), 1.0);
    total = static_cast<double>(w.size());
  }
  const double spacing = total / n_parents;
  const double start = std::uniform_real_distribution<double>(0.0, spacing)(rng);
  size_t i = 0;
  double cum = w[0];
  for (int k = 0; k < n_parents; ++k) {
    const double p = start + k * spacing;
    while (p >= cum && i + 1 < w.size()) cum += w[++i];
    out.push_back(static_cast<int>(i));
  }
  return out;
}

EstimatorParams crossover_uniform_scatter(const EstimatorParams& p1,
                                          const EstimatorParams& p2,
                                          std::span<const ParamId> ids,
                                          Rng& rng) {
  EstimatorParams child = p1;
  std::bernoulli_distribution coin(0.5);
  for (ParamId id : ids) child[id] = coin(rng) ? p1[id] : p2[id];
  return child;
}

EstimatorParams mutate_along(const EstimatorParams& x, int gen,
                             const GaConfig& cfg, std::span<const ParamId> ids,
                             std::span<const double> direction) {
  double norm = 0.0;
  for (double d : direction) norm += d * d;
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) throw ConfigError("mutation direction has zero norm");
  const double alpha =
      cfg.alpha0 * std::exp(static_cast<double>(gen) / cfg.generations);
  std::vector<double> step(ids.size());
  for (size_t k = 0; k < ids.size(); ++k) {
    const ParamBounds& b = cfg.bounds[static_cast<int>(ids[k])];
    step[k] = alpha * (cfg.alpha_relative ? b.range() : 1.0) * direction[k] / norm;
  }
  double scale = 1.0;
  EstimatorParams y = x;
  for (int attempt = 0; attempt <= 10; ++attempt) {
    bool inside = true;
    for (size_t k = 0; k < ids.size(); ++k) {
      const ParamBounds& b = cfg.bounds[static_cast<int>(ids[k])];
      y[ids[k]] = x[ids[k]] + scale * step[k];
      if (y[ids[k]] < b.lo || y[ids[k]] > b.hi) inside = false;
    }
    if (inside) return y;
    if (attempt < 10) scale *= 0.5;
  }
  for (ParamId id : ids) {
    const ParamBounds& b = cfg.bounds[static_cast<int>(id)];
    y[id] = std::clamp(y[id], b.lo, b.hi);
  }
  return y;
}

EstimatorParams mutate_adaptive(const EstimatorParams& x, int gen,
                                const GaConfig& cfg,
                                std::span<const ParamId> ids, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> d(ids.size());
  double norm = 0.0;
  while (!(norm > 0.0)) {
    norm = 0.0;
    for (double& v : d) {
      v = normal(rng);
      norm += v * v;
    }
  }
  return mutate_along(x, gen, cfg, ids, d);
}

GaResult run_ga(const GaConfig& cfg, const Dataset& ds, FilterKind kind,
                const EstimatorConfig& base) {
  cfg.validate();
  if (ds.hops.empty()) throw DataError("training dataset is empty");
  const std::vector<ParamId> ids = trainable_params(kind);
  const int n = cfg.population;

  std::vector<EstimatorParams> pop(n, base.params);
  for (int j = 0; j < n; ++j) {
    Rng rng = stream_rng(cfg.seed, 0, static_cast<std::uint64_t>(j));
    for (ParamId id : ids) {
      const ParamBounds& b = cfg.bounds[static_cast<int>(id)];
      pop[j][id] = std::uniform_real_distribution<double>(b.lo, b.hi)(rng);
    }
  }
  std::vector<CostBreakdown> costs(n);
  auto evaluate_range = [&](int from) {
    parallel_for(n - from, cfg.threads, [&](int k) {
      costs[from + k] = evaluate_cost(pop[from + k], ds, kind, base);
    });
  };
  evaluate_range(0);

  GaResult result;
  auto record = [&](int gen) {
    std::vector<double> c(n);
    for (int j = 0; j < n; ++j) c[j] = costs[j].L_c;
    const auto best = std::min_element(c.begin(), c.end()) - c.begin();
    if (gen == 0 || costs[best].L_c < result.best_cost.L_c) {
      result.best = pop[best];
      result.best_cost = costs[best];
    }
    GenerationStats s;
    s.generation = gen;
    s.best = result.best_cost.L_c;
    s.mean = std::accumulate(c.begin(), c.end(), 0.0) / n;
    s.median = median_of(c);
    result.history.push_back(s);
  };
  record(0);

  const int n_elite = std::clamp(
      static_cast<int>(std::lround(cfg.elite_frac * n)), 1, n);
  const int n_cross = std::clamp(
      static_cast<int>(std::lround(cfg.crossover_frac * n)), 0, n - n_elite);
  const int n_mut = n - n_elite - n_cross;

  for (int gen = 1; gen < cfg.generations; ++gen) {
    std::vector<double> c(n);
    for (int j = 0; j < n; ++j) c[j] = costs[j].L_c;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return c[a] < c[b]; });
    const auto weights = rank_weights(c);
    Rng sel = stream_rng(cfg.seed, static_cast<std::uint64_t>(gen), 1ull << 40);
    auto parents = sus_select(weights, 2 * n_cross + n_mut, sel);
    std::shuffle(parents.begin(), parents.end(), sel);

    std::vector<EstimatorParams> next(n);
    std::vector<CostBreakdown> next_costs(n);
    for (int e = 0; e < n_elite; ++e) {
      next[e] = pop[order[e]];
      next_costs[e] = costs[order[e]];
    }
    for (int j = 0; j < n_cross; ++j) {
      Rng rng = stream_rng(cfg.seed, static_cast<std::uint64_t>(gen),
                           static_cast<std::uint64_t>(j));
      next[n_elite + j] = crossover_uniform_scatter(
          pop[parents[2 * j]], pop[parents[2 * j + 1]], ids, rng);
    }
    for (int m = 0; m < n_mut; ++m) {
      Rng rng = stream_rng(cfg.seed, static_cast<std::uint64_t>(gen),
                           static_cast<std::uint64_t>(n_cross + m));
      next[n_elite + n_cross + m] = mutate_adaptive(
          pop[parents[2 * n_cross + m]], gen, cfg, ids, rng);
    }
    pop = std::move(next);
    costs = std::move(next_costs);
    evaluate_range(n_elite);
    record(gen);
  }
  return result;
}

}  // namespace hopest
