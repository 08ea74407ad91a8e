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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hopest/dynamics.hpp"
#include "hopest/hpe.hpp"

namespace hopest {

/// One estimator tick of a trial.
struct LogRow {
  double t = 0.0;
  double z_true = 0.0;  // tracked-point height
  double v_true = 0.0;
  double a_true = 0.0;  // kinematic acceleration
  double a_lowg = 0.0;  // raw specific force readings
  double a_highg = 0.0;
  double a_world_est = 0.0;  // HVSE input after low-pass
  Phase phase = Phase::kDrop;
  std::optional<TransitionKind> event;  // detected by the phase estimator
  double z_est = 0.0;
  double v_est = 0.0;
  double P00 = 0.0;
  double P01 = 0.0;
  double P11 = 0.0;
  double twr = 0.0;
  double h_desired = 0.0;
  bool contact = false;

  bool operator==(const LogRow&) const = default;
};

struct HopLog {
  double est_rate = 840.0;
  std::vector<LogRow> rows;
  /// Transitions found by the simulator at its internal step. Empty for
  /// ingested logs; use detect_true_transitions() for tick resolution.
  std::vector<TrueTransition> true_transitions;
  bool has_contact = true;  // false when the source had no contact column

  double t_begin() const { return rows.empty() ? 0.0 : rows.front().t; }
  double t_end() const { return rows.empty() ? 0.0 : rows.back().t; }
};

/// Column order of the CSV form. `contact` is the last column and optional
/// on input.
const std::vector<std::string>& csv_columns();

void write_csv(const HopLog& log, std::ostream& os);
/// Throws DataError on malformed input naming the line.
HopLog read_csv(std::istream& is);

void write_csv_file(const HopLog& log, const std::filesystem::path& path);
HopLog read_csv_file(const std::filesystem::path& path);

/// Estimator rate implied by the row timestamps.
double infer_est_rate(const std::vector<LogRow>& rows);

/// True transitions at tick resolution: TD at contact onset, MS at the first
/// contact tick with non-negative body velocity, LO at contact release, HA
/// at the aerial velocity sign change. Without a contact column, contact is
/// inferred from the tracked height at or below `rp.contact_height()`.
std::vector<TrueTransition> detect_true_transitions(
    const HopLog& log, const RobotParams& rp = RobotParams{});

/// Writes `content` next to `path` and renames it into place.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace hopest
