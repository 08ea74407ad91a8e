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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hopest/config.hpp"
#include "hopest/metrics.hpp"

namespace hopest {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;

/// Command-line overrides applied on top of the config file.
struct Overrides {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out_dir;
  std::optional<FilterKind> filter;
  std::optional<ControlSource> control;
  std::optional<int> threads;
};

/// Loads the config (defaults when none is given) and applies overrides.
RunConfig resolve_config(const Overrides& o);

/// Each command writes its artifacts into cfg.out_dir, creating it, and a
/// short human summary to `out`. Errors are thrown as ConfigError or
/// DataError.
void cmd_simulate(const RunConfig& cfg, std::ostream& out);
void cmd_train(const RunConfig& cfg, std::ostream& out);
void cmd_evaluate(const RunConfig& cfg, std::ostream& out);
void cmd_sweep_freq(const RunConfig& cfg, std::ostream& out);
/// Returns false if any input row was rejected; the others are still
/// written.
bool cmd_agility(const RunConfig& cfg, std::ostream& out);
void cmd_subset(const RunConfig& cfg, std::ostream& out);

struct AgilityRowResult {
  int line = 0;
  std::string name;
  std::string mode;  // "measured" or "model"
  std::optional<AgilityResult> result;
  std::string error;
};
/// Parses a CSV with a header row and evaluates every row independently. A
/// row with t_apogee and t_cycle uses the measured form; otherwise the model
/// form with the AgilityInputs column names. beta picks the family reported
/// as nu_uha in both forms.
std::vector<AgilityRowResult> agility_table(std::istream& is);
std::string agility_csv(const std::vector<AgilityRowResult>& rows);

/// Flat CSV header and one row of a report.
std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& label, const MetricsReport& r);

}  // namespace hopest
