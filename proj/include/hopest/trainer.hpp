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

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "hopest/estimator.hpp"
#include "hopest/hop_log.hpp"
#include "hopest/hvse.hpp"
#include "hopest/sensing.hpp"
#include "hopest/simulation.hpp"

namespace hopest {

/// One hop of a source trial: rows [begin, end) starting at a true apex (or the
/// trial start) and ending shortly after the next apex.
struct HopRef {
  std::size_t source = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
  double height = 0.0;  // desired apex height at the start of the hop
};

/// Hops scored against replays of their whole source trials, so the
/// estimator reaches each hop with the state it accumulated since the start
/// of the trial.
struct Dataset {
  std::vector<std::shared_ptr<const HopLog>> sources;
  std::vector<HopRef> hops;

  std::size_t size() const { return hops.size(); }
  void add_source(HopLog log, double margin = 0.2, const RobotParams& rp = {});
};

struct CostBreakdown {
  double L_c = 0.0;
  double gamma1 = 0.0;  // apex MAPE, fraction
  double gamma2 = 0.0;  // position RMSE, m
  double gamma3 = 0.0;  // velocity RMSE, m/s
  int n_HA = 0;         // true apexes
  int n_HA_est = 0;     // detected apexes
  bool counts_match = false;  // every trial detected as many apexes as it has
};

inline constexpr double kApexWeight = 100.0;
inline constexpr double kTrajectoryWeight = 10.0;
/// Cost assigned when replay fails numerically, and the cap on any cost.
inline constexpr double kFailureCost = 1e12;

/// Replays every source trial holding a selected hop with `params` (robot,
/// jerk and IMUPT settings from `base`), scoring only rows inside hops.
/// Apexes are paired in time order within each hop. Throws DataError if the
/// dataset holds no true apex.
CostBreakdown evaluate_cost(const EstimatorParams& params, const Dataset& ds,
                            FilterKind kind, const EstimatorConfig& base = {});

/// Row ranges of the hops in a log: each starts at a true apex, or at the
/// first row of a log that opens in the drop, and ends `margin` seconds
/// after the next true apex.
std::vector<std::pair<std::size_t, std::size_t>> hop_ranges(
    const HopLog& log, double margin = 0.2, const RobotParams& rp = {});

/// A hop as a self-contained log.
HopLog extract_hop(const Dataset& ds, const HopRef& hop);

/// Picks `per_height[h]` hops of each commanded height h, without
/// replacement, deterministically from `seed`. Keeps the original order.
/// Throws DataError listing every height that falls short.
Dataset stratified_subset(const Dataset& ds,
                          const std::map<double, int>& per_height,
                          std::uint64_t seed);

struct SynthesisSpec {
  TrialConfig trial;  // schedule is replaced per height
  std::vector<double> heights = {1.0, 2.0, 3.0, 4.0};
  int hops_per_height = 8;
  double trial_duration = 12.0;
  std::uint64_t seed = 1;
};

/// Simulates trials per height until enough hops exist.
Dataset synthesize_dataset(const SynthesisSpec& spec);

struct GaConfig {
  int population = 1000;
  int generations = 20;
  double elite_frac = 0.05;
  double crossover_frac = 0.80;
  double mutation_frac = 0.15;
  double alpha0 = 0.05;
  bool alpha_relative = true;  // alpha0 is a fraction of each bound range
  std::array<ParamBounds, kParamCount> bounds = default_bounds_table();
  std::uint64_t seed = 1;
  int threads = 0;  // 0 uses the hardware concurrency

  void validate() const;
};

/// Linear ranking for minimization: best weight 2, worst weight 1.
std::vector<double> rank_weights(std::span<const double> costs);

/// Stochastic universal sampling over `weights`. All-zero weights select
/// uniformly.
std::vector<int> sus_select(std::span<const double> weights, int n_parents,
                            Rng& rng);

/// Each trainable parameter comes from p1 or p2 by a fair coin; frozen
/// parameters come from p1.
EstimatorParams crossover_uniform_scatter(const EstimatorParams& p1,
                                          const EstimatorParams& p2,
                                          std::span<const ParamId> ids,
                                          Rng& rng);

/// x' = x + alpha * d / |d| over `ids`, with alpha = alpha0 * exp(gen /
/// generations) (times each bound range when relative). Out-of-bound
/// results halve alpha up to ten times, then clamp.
EstimatorParams mutate_adaptive(const EstimatorParams& x, int gen,
                                const GaConfig& cfg,
                                std::span<const ParamId> ids, Rng& rng);
EstimatorParams mutate_along(const EstimatorParams& x, int gen,
                             const GaConfig& cfg, std::span<const ParamId> ids,
                             std::span<const double> direction);

struct GenerationStats {
  int generation = 0;
  double best = 0.0;
  double mean = 0.0;
  double median = 0.0;
};

struct GaResult {
  EstimatorParams best;
  CostBreakdown best_cost;
  std::vector<GenerationStats> history;  // one row per generation
};

/// Generation 0 is the random initial population. `base` supplies frozen
/// parameter values and the replay settings.
GaResult run_ga(const GaConfig& cfg, const Dataset& ds, FilterKind kind,
                const EstimatorConfig& base = {});

/// Random stream for (seed, generation, index).
Rng stream_rng(std::uint64_t seed, std::uint64_t generation,
               std::uint64_t index);

}  // namespace hopest
