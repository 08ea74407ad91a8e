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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hopest/hvse.hpp"
#include "hopest/simulation.hpp"
#include "hopest/trainer.hpp"

namespace hopest {

inline const std::vector<double> kSweepFrequencies = {
    3360, 1680, 840, 700, 600, 500, 400, 300, 200, 100, 50, 10};

struct SweepSettings {
  std::vector<double> frequencies = kSweepFrequencies;
  double height = 3.0;
  double duration = 10.0;
  double control_rate = 400.0;  // capped at the estimator rate
  int noisy_seeds = 3;
  double bin = 0.1;   // s, width of the time bins errors are pooled over
  double tail = 2.0;  // s, final window for the reported std
};

struct TrainSettings {
  GaConfig ga;
  SynthesisSpec synthesis;
  std::vector<std::filesystem::path> logs;  // empty: synthesize
  double margin = 0.2;
  std::map<double, int> subset;  // hops per height; empty keeps all
  std::uint64_t subset_seed = 1;
};

/// Everything a command needs. Relative paths are resolved against the
/// directory of the config file.
struct RunConfig {
  TrialConfig trial;
  std::optional<std::filesystem::path> params_file;
  TrainSettings train;
  SweepSettings sweep;
  std::vector<std::filesystem::path> logs;  // inputs of evaluate and subset
  bool aerial_only = false;
  std::optional<std::filesystem::path> agility_inputs;
  std::filesystem::path out_dir = "out";
  int threads = 0;
};

/// INI text with the sections dynamics, sensing, hpe, hvse, trainer,
/// metrics and cli. Unknown sections or keys and bad values throw
/// ConfigError naming the source and key. An absent file is a ConfigError.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(std::istream& is, const std::string& source,
                           const std::filesystem::path& base_dir = {});

/// Applies --seed: trial, synthesis, GA and subset seeds all follow it.
void override_seed(RunConfig& cfg, std::uint64_t seed);

/// Parameter files hold {"filter": ..., "params": {name: value}} with the
/// param_name() spellings. Missing names keep the values of `defaults`.
struct ParamsFile {
  FilterKind kind = FilterKind::kKf1;
  EstimatorParams params;
};
ParamsFile read_params_json(const std::filesystem::path& path,
                            const EstimatorParams& defaults = {});
std::string params_json(const ParamsFile& pf);
void write_params_json(const ParamsFile& pf,
                       const std::filesystem::path& path);

}  // namespace hopest
