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

#include "hopest/replay.hpp"

namespace hopest {

HopLog replay(const HopLog& log, const EstimatorConfig& cfg) {
  HopLog out = log;
  std::size_t i = 0;
  replay_rows(log, 0, log.rows.size(), cfg,
              [&](const LogRow&, const TickOutput& t, const FilterState& fs) {
                LogRow& r = out.rows[i++];
                r.a_world_est = t.u_hvse;
                r.phase = t.phase;
                r.event = t.event;
                r.z_est = fs.z();
                r.v_est = fs.v();
                r.P00 = fs.P(0, 0);
                r.P01 = fs.P(0, 1);
                r.P11 = fs.P(1, 1);
              });
  return out;
}

}  // namespace hopest
