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

#include "hopest/hvse.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "hopest/errors.hpp"

namespace hopest {

namespace {

struct ParamInfo {
  std::string_view name;
  double EstimatorParams::*member;
  ParamBounds bounds;
};

constexpr ParamInfo kParamTable[kParamCount] = {
    {"f_HVSE", &EstimatorParams::f_hvse, {5.0, 400.0}},
    {"f_HPE", &EstimatorParams::f_hpe, {5.0, 400.0}},
    {"g_s", &EstimatorParams::g_switch, {12.0, 14.5}},
    {"sigma_az", &EstimatorParams::sigma_az, {1e-4, 10.0}},
    {"sigma_bz", &EstimatorParams::sigma_bz, {1e-4, 10.0}},
    {"sigma_vz", &EstimatorParams::sigma_vz, {1e-4, 10.0}},
    {"sigma_pz", &EstimatorParams::sigma_pz, {1e-4, 10.0}},
    {"c_vel2", &EstimatorParams::c_vel2, {-10.0, 10.0}},
    {"c_vel1", &EstimatorParams::c_vel1, {-10.0, 10.0}},
    {"c_vel0", &EstimatorParams::c_vel0, {-10.0, 10.0}},
    {"c_ch1", &EstimatorParams::c_ch1, {-10.0, 10.0}},
    {"c_ch0", &EstimatorParams::c_ch0, {-10.0, 10.0}},
    {"c_m1", &EstimatorParams::c_m1, {-10.0, 10.0}},
    {"c_m0", &EstimatorParams::c_m0, {-10.0, 10.0}},
};

const ParamInfo& info(ParamId id) {
  return kParamTable[static_cast<int>(id)];
}

void symmetrize(StateMat& P) { P = 0.5 * (P + P.transpose()).eval(); }

}  // namespace

std::string_view to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::kKf1: return "kf1";
    case FilterKind::kKf2: return "kf2";
    case FilterKind::kEskf1: return "eskf1";
    case FilterKind::kEskf2: return "eskf2";
  }
  return "";
}

std::optional<FilterKind> filter_kind_from_string(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "kf1") return FilterKind::kKf1;
  if (lower == "kf2") return FilterKind::kKf2;
  if (lower == "eskf1") return FilterKind::kEskf1;
  if (lower == "eskf2") return FilterKind::kEskf2;
  return std::nullopt;
}

int state_dim(FilterKind kind) { return kind == FilterKind::kKf1 ? 2 : 3; }

bool is_error_state(FilterKind kind) {
  return kind == FilterKind::kEskf1 || kind == FilterKind::kEskf2;
}

std::string_view param_name(ParamId id) { return info(id).name; }

std::optional<ParamId> param_from_name(std::string_view name) {
  for (int i = 0; i < kParamCount; ++i) {
    if (kParamTable[i].name == name) return static_cast<ParamId>(i);
  }
  return std::nullopt;
}

ParamBounds default_bounds(ParamId id) { return info(id).bounds; }

std::array<ParamBounds, kParamCount> default_bounds_table() {
  std::array<ParamBounds, kParamCount> out{};
  for (int i = 0; i < kParamCount; ++i) out[i] = kParamTable[i].bounds;
  return out;
}

double& EstimatorParams::operator[](ParamId id) { return this->*info(id).member; }

double EstimatorParams::operator[](ParamId id) const {
  return this->*info(id).member;
}

EstimatorParams EstimatorParams::identity_scaling() {
  EstimatorParams p;
  p.c_vel2 = 0.0;
  p.c_vel1 = 0.0;
  p.c_vel0 = 1.0;
  p.c_ch1 = 0.0;
  p.c_ch0 = 1.0;
  return p;
}

void EstimatorParams::validate(
    std::span<const ParamBounds, kParamCount> bounds) const {
  for (int i = 0; i < kParamCount; ++i) {
    const auto id = static_cast<ParamId>(i);
    const double v = (*this)[id];
    if (!std::isfinite(v) || v < bounds[i].lo || v > bounds[i].hi) {
      std::ostringstream os;
      os << "estimator parameter " << param_name(id) << " = " << v
         << " outside [" << bounds[i].lo << ", " << bounds[i].hi << "]";
      throw ConfigError(os.str());
    }
  }
}

void EstimatorParams::validate() const {
  const auto b = default_bounds_table();
  validate(std::span<const ParamBounds, kParamCount>(b));
}

std::vector<ParamId> trainable_params(FilterKind kind) {
  using P = ParamId;
  std::vector<ParamId> ids = {P::kFHvse, P::kFHpe, P::kGSwitch, P::kSigmaAz};
  if (state_dim(kind) == 3) ids.push_back(P::kSigmaBz);
  ids.push_back(P::kSigmaVz);
  ids.push_back(P::kSigmaPz);
  if (!is_error_state(kind)) {
    for (P id : {P::kCVel2, P::kCVel1, P::kCVel0, P::kCCh1, P::kCCh0}) {
      ids.push_back(id);
    }
  }
  if (kind == FilterKind::kKf2 || kind == FilterKind::kEskf2) {
    ids.push_back(P::kCM1);
    ids.push_back(P::kCM0);
  }
  return ids;
}

Eigen::Matrix2d default_initial_covariance() {
  Eigen::Matrix2d P;
  P << 0.0582, 0.0774, 0.0774, 0.1441;
  return P * 1e-4;
}

FilterState make_filter(FilterKind kind, double z0, double v0) {
  return make_filter(kind, z0, v0, default_initial_covariance());
}

FilterState make_filter(FilterKind kind, double z0, double v0,
                        const Eigen::Matrix2d& P0) {
  const int n = state_dim(kind);
  FilterState fs;
  fs.kind = kind;
  fs.x = StateVec::Zero(n);
  fs.x(0) = z0;
  fs.x(1) = v0;
  fs.P = StateMat::Zero(n, n);
  fs.P.topLeftCorner(2, 2) = P0;
  if (n == 3) fs.P(2, 2) = kInitialBiasVariance;
  fs.dx = StateVec::Zero(n);
  return fs;
}

FilterState predict(const FilterState& fs, double u, double dt,
                    const EstimatorParams& p) {
  if (!std::isfinite(u)) throw FilterFault("predict: non-finite input");
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw FilterFault("predict: time step must be positive");
  }
  const int n = fs.dim();
  StateMat F = StateMat::Identity(n, n);
  F(0, 1) = dt;
  StateVec G = StateVec::Zero(n);
  G(0) = 0.5 * dt * dt;
  G(1) = dt;
  if (n == 3) {
    F(0, 2) = -0.5 * dt * dt;
    F(1, 2) = -dt;
  }
  StateMat Q = (p.sigma_az * p.sigma_az) * G * G.transpose();
  if (n == 3) Q(2, 2) += p.sigma_bz * p.sigma_bz * dt;

  FilterState out = fs;
  out.x = F * fs.x + G * u;
  out.P = F * fs.P * F.transpose() + Q;
  symmetrize(out.P);
  if (!out.x.allFinite() || !out.P.allFinite()) {
    throw FilterFault("predict: non-finite state");
  }
  return out;
}

std::string_view to_string(ImuptKind kind) {
  switch (kind) {
    case ImuptKind::kPositionTd: return "position_td";
    case ImuptKind::kPositionLo: return "position_lo";
    case ImuptKind::kVelocityMs: return "velocity_ms";
    case ImuptKind::kVelocityLo: return "velocity_lo";
    case ImuptKind::kAccelBiasAerial: return "accel_bias_aerial";
  }
  return "";
}

int observed_index(ImuptKind kind) {
  switch (kind) {
    case ImuptKind::kPositionTd:
    case ImuptKind::kPositionLo: return 0;
    case ImuptKind::kVelocityMs:
    case ImuptKind::kVelocityLo: return 1;
    case ImuptKind::kAccelBiasAerial: return 2;
  }
  return 0;
}

FilterState measurement_update(const FilterState& fs,
                               const ImuptMeasurement& m) {
  const int n = fs.dim();
  const int i = observed_index(m.kind);
  if (i >= n) throw FilterFault("measurement_update: state is not observed");
  if (!std::isfinite(m.value)) {
    throw FilterFault("measurement_update: non-finite measurement");
  }
  const double s = fs.P(i, i) + m.variance;
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw FilterFault("measurement_update: singular innovation covariance");
  }
  const StateVec K = fs.P.col(i) / s;

  FilterState out = fs;
  if (is_error_state(fs.kind)) {
    // Error state starts at zero; the observation is of x + dx.
    const double innovation = m.value - (fs.x(i) + fs.dx(i));
    out.dx = fs.dx + K * innovation;
    out.x = fs.x + out.dx;
    out.dx.setZero();
  } else {
    out.x = fs.x + K * (m.value - fs.x(i));
  }
  StateMat IKH = StateMat::Identity(n, n);
  IKH.col(i) -= K;
  out.P = IKH * fs.P * IKH.transpose() + m.variance * K * K.transpose();
  symmetrize(out.P);
  if (!out.x.allFinite() || !out.P.allFinite()) {
    throw FilterFault("measurement_update: non-finite state");
  }
  return out;
}

double compute_lf(const RobotParams& rp) { return rp.com_to_foot(); }

double delta_vlo(double v_lo, double h_ch, const EstimatorParams& p) {
  return (p.c_vel2 * v_lo * v_lo + p.c_vel1 * v_lo + p.c_vel0) *
         (p.c_ch1 * h_ch + p.c_ch0);
}

bool imupt_allowed(FilterKind filter, ImuptKind imupt) {
  switch (imupt) {
    case ImuptKind::kPositionTd:
    case ImuptKind::kPositionLo:
    case ImuptKind::kVelocityMs: return true;
    case ImuptKind::kVelocityLo: return !is_error_state(filter);
    case ImuptKind::kAccelBiasAerial:
      return filter == FilterKind::kKf2 || filter == FilterKind::kEskf2;
  }
  return false;
}

std::vector<ImuptKind> allowed_imupts(FilterKind filter) {
  std::vector<ImuptKind> out;
  for (ImuptKind k : {ImuptKind::kPositionTd, ImuptKind::kPositionLo,
                      ImuptKind::kVelocityMs, ImuptKind::kVelocityLo,
                      ImuptKind::kAccelBiasAerial}) {
    if (imupt_allowed(filter, k)) out.push_back(k);
  }
  return out;
}

ImuptMask imupt_bit(ImuptKind kind) {
  return static_cast<ImuptMask>(1u << static_cast<unsigned>(kind));
}

ImuptMask default_imupt_mask(FilterKind filter) {
  ImuptMask m = 0;
  for (ImuptKind k : allowed_imupts(filter)) m |= imupt_bit(k);
  return m;
}

ImuptMeasurement make_imupt(const FilterState& fs, ImuptKind kind,
                            const ImuptContext& ctx) {
  if (!imupt_allowed(fs.kind, kind)) {
    std::ostringstream os;
    os << "IMUPT " << to_string(kind) << " is not available for filter "
       << to_string(fs.kind);
    throw ImuptRejected(os.str());
  }
  if (ctx.params == nullptr || ctx.robot == nullptr) {
    throw ImuptRejected("IMUPT context is missing parameters");
  }
  const EstimatorParams& p = *ctx.params;
  const RobotParams& rp = *ctx.robot;
  ImuptMeasurement m{kind, 0.0, 0.0};
  switch (kind) {
    case ImuptKind::kPositionTd:
    case ImuptKind::kPositionLo: {
      const Eigen::Vector3d foot(0.0, 0.0, -compute_lf(rp));
      m.value = (ctx.attitude * foot)(2);
      m.variance = p.sigma_pz * p.sigma_pz;
      break;
    }
    case ImuptKind::kVelocityMs:
      m.value = 0.0;
      m.variance = p.sigma_vz * p.sigma_vz;
      break;
    case ImuptKind::kVelocityLo:
      m.value = fs.v() * delta_vlo(fs.v(), ctx.h_ch, p);
      m.variance = p.sigma_vz * p.sigma_vz;
      break;
    case ImuptKind::kAccelBiasAerial: {
      const double thrust = p.c_m1 * ctx.total_duty + p.c_m0;
      const Eigen::Vector3d f_body(0.0, 0.0, thrust / rp.total_mass());
      const double predicted = (ctx.attitude * f_body)(2) - rp.gravity;
      // The filter integrates u - b, so the bias is what u reads above the
      // acceleration the thrust model predicts.
      m.value = ctx.world_accel - predicted;
      m.variance = p.sigma_bz * p.sigma_bz;
      break;
    }
  }
  return m;
}

FilterState apply_imupt(const FilterState& fs, ImuptKind kind,
                        const ImuptContext& ctx) {
  return measurement_update(fs, make_imupt(fs, kind, ctx));
}

FilterState apply_transition_imupts(const FilterState& fs,
                                    TransitionKind event,
                                    const ImuptContext& ctx, ImuptMask mask) {
  auto enabled = [&](ImuptKind k) {
    return (mask & imupt_bit(k)) != 0 && imupt_allowed(fs.kind, k);
  };
  FilterState out = fs;
  switch (event) {
    case TransitionKind::kTouchdown:
      if (enabled(ImuptKind::kPositionTd)) {
        out = apply_imupt(out, ImuptKind::kPositionTd, ctx);
      }
      break;
    case TransitionKind::kMaxSquat:
      if (enabled(ImuptKind::kVelocityMs)) {
        out = apply_imupt(out, ImuptKind::kVelocityMs, ctx);
      }
      break;
    case TransitionKind::kLiftoff: {
      const FilterState before = out;
      if (enabled(ImuptKind::kPositionLo)) {
        out = apply_imupt(out, ImuptKind::kPositionLo, ctx);
      }
      if (enabled(ImuptKind::kVelocityLo)) {
        ImuptMeasurement m = make_imupt(before, ImuptKind::kVelocityLo, ctx);
        out = measurement_update(out, m);
      }
      break;
    }
    case TransitionKind::kApex:
      break;
  }
  return out;
}

bool covariance_healthy(const StateMat& P, double tol) {
  if (!P.allFinite()) return false;
  if ((P - P.transpose()).cwiseAbs().maxCoeff() > tol * (1.0 + P.cwiseAbs().maxCoeff())) {
    return false;
  }
  Eigen::SelfAdjointEigenSolver<StateMat> es(P, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

}  // namespace hopest
