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

#include <cstddef>

#include "hopest/estimator.hpp"
#include "hopest/hop_log.hpp"

namespace hopest {

/// Re-runs the estimator over the recorded accelerometer stream of rows
/// [begin, end), starting from the true state of rows[begin] in the drop
/// phase. `visit(row, tick_output, filter_state)` is called per row.
template <typename Visit>
void replay_rows(const HopLog& log, std::size_t begin, std::size_t end,
                 EstimatorConfig cfg, Visit&& visit) {
  if (begin >= end) return;
  cfg.est_rate = log.est_rate;
  HoppingEstimator est(cfg, log.rows[begin].z_true, log.rows[begin].v_true);
  for (std::size_t i = begin; i < end; ++i) {
    const LogRow& r = log.rows[i];
    const ImuSample sample{r.t, r.a_lowg, r.a_highg};
    const TickOutput out =
        est.tick(sample, total_duty_for_twr(r.twr), r.h_desired);
    visit(r, out, est.filter());
  }
}

/// Copy of `log` with the estimate columns recomputed by `cfg`.
HopLog replay(const HopLog& log, const EstimatorConfig& cfg);

}  // namespace hopest
