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

// hopest: simulate, train, evaluate, sweep-freq, agility, subset.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hopest/commands.hpp"
#include "hopest/errors.hpp"

int main(int argc, char** argv) {
  using namespace hopest;
  CLI::App app{"Vertical state estimation for hopping robots"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config, out_dir, filter, control;
  std::uint64_t seed = 0;
  int threads = 0;
  app.add_option("--config", config, "INI run configuration")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "seed for every random stream");
  auto* out_opt = app.add_option("--out-dir", out_dir, "artifact directory");
  auto* filter_opt = app.add_option("--filter", filter, "kf1, kf2, eskf1 or eskf2")
                         ->check(CLI::IsMember({"kf1", "kf2", "eskf1", "eskf2"}));
  auto* control_opt = app.add_option("--control-source", control, "gt or se")
                          ->check(CLI::IsMember({"gt", "se"}));
  auto* threads_opt = app.add_option("--threads", threads, "worker threads, 0 for all cores")
                          ->check(CLI::NonNegativeNumber);
  for (auto* opt : {seed_opt, out_opt, filter_opt, control_opt, threads_opt}) {
    opt->configurable(false);
  }

  auto* simulate = app.add_subcommand("simulate", "closed-loop trial, log and metrics");
  auto* train = app.add_subcommand("train", "genetic training of the filter parameters");
  auto* evaluate = app.add_subcommand("evaluate", "replay logs and compute metrics");
  auto* sweep = app.add_subcommand("sweep-freq", "estimator rate sweep");
  auto* agility = app.add_subcommand("agility", "vertical agility table");
  auto* subset = app.add_subcommand("subset", "stratified hop subset manifest");
  std::string agility_inputs;
  agility->add_option("inputs", agility_inputs, "CSV of platform rows")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    Overrides o;
    if (!config.empty()) o.config = config;
    if (*seed_opt) o.seed = seed;
    if (*out_opt) o.out_dir = out_dir;
    if (*filter_opt) o.filter = filter_kind_from_string(filter);
    if (*control_opt) o.control = control_source_from_string(control);
    if (*threads_opt) o.threads = threads;
    RunConfig cfg = resolve_config(o);

    if (*simulate) cmd_simulate(cfg, std::cout);
    if (*train) cmd_train(cfg, std::cout);
    if (*evaluate) cmd_evaluate(cfg, std::cout);
    if (*sweep) cmd_sweep_freq(cfg, std::cout);
    if (*subset) cmd_subset(cfg, std::cout);
    if (*agility) {
      if (!agility_inputs.empty()) cfg.agility_inputs = agility_inputs;
      if (!cmd_agility(cfg, std::cout)) return kExitData;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const FilterFault& e) {
    std::cerr << "filter fault: " << e.what() << '\n';
    return kExitData;
  } catch (const DynamicsFault& e) {
    std::cerr << "dynamics fault: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}
