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

#include "hopest/estimator.hpp"

#include <tuple>

namespace hopest {

HoppingEstimator::HoppingEstimator(const EstimatorConfig& cfg, double z0,
                                   double v0)
    : cfg_(cfg),
      mask_(cfg.imupts.value_or(default_imupt_mask(cfg.kind))),
      fs_(make_filter(cfg.kind, z0, v0)) {
  ps_.jerk_window = cfg.jerk_window;
  ps_.jerk_threshold = cfg.resolved_jerk_threshold();
  lp_hvse_.cutoff = cfg.params.f_hvse;
  lp_hpe_.cutoff = cfg.params.f_hpe;
}

TickOutput HoppingEstimator::tick(const ImuSample& sample, double total_duty,
                                  double h_ch) {
  const double dt = cfg_.dt();
  const double g = cfg_.robot.gravity;
  TickOutput out;
  // Identity attitude: the body z axis reads world vertical specific force.
  out.u_raw = select_accel(sample, cfg_.params.g_switch, g) - g;
  std::tie(lp_hvse_, out.u_hvse) = low_pass(lp_hvse_, out.u_raw, dt);
  std::tie(lp_hpe_, out.u_hpe) = low_pass(lp_hpe_, out.u_raw, dt);

  fs_ = predict(fs_, out.u_hvse, dt, cfg_.params);
  out.z_prior = fs_.z();

  auto [ps, event] = hpe_update(ps_, out.u_hpe, fs_.v(), dt);
  ps_ = ps;

  ImuptContext ctx;
  ctx.h_ch = h_ch;
  ctx.total_duty = total_duty;
  ctx.world_accel = out.u_hvse;
  ctx.params = &cfg_.params;
  ctx.robot = &cfg_.robot;
  if (event) {
    out.event = event->kind;
    fs_ = apply_transition_imupts(fs_, event->kind, ctx, mask_);
  }
  if (is_aerial(ps_.phase) &&
      (mask_ & imupt_bit(ImuptKind::kAccelBiasAerial)) != 0 &&
      imupt_allowed(fs_.kind, ImuptKind::kAccelBiasAerial)) {
    fs_ = apply_imupt(fs_, ImuptKind::kAccelBiasAerial, ctx);
  }
  out.phase = ps_.phase;
  return out;
}

}  // namespace hopest
