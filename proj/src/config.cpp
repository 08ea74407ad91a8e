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

#include "hopest/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "hopest/errors.hpp"

namespace hopest {
namespace {

namespace fs = std::filesystem;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

struct Ctx {
  std::string where;  // "file: [section] key"
  fs::path base_dir;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(where + ": " + msg);
  }

  double num(const std::string& v) const {
    double out = 0.0;
    const std::string t = trim(v);
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (t.empty() || ec != std::errc() || end != t.data() + t.size()) {
      fail("expected a number, got '" + v + "'");
    }
    return out;
  }

  long integer(const std::string& v) const {
    long out = 0;
    const std::string t = trim(v);
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (t.empty() || ec != std::errc() || end != t.data() + t.size()) {
      fail("expected an integer, got '" + v + "'");
    }
    return out;
  }

  std::uint64_t seed(const std::string& v) const {
    const long s = integer(v);
    if (s < 0) fail("seed must be non-negative");
    return static_cast<std::uint64_t>(s);
  }

  bool boolean(const std::string& v) const {
    const std::string t = trim(v);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    fail("expected a boolean, got '" + v + "'");
  }

  std::vector<double> nums(const std::string& v) const {
    std::vector<double> out;
    for (const auto& item : split(v, ',')) out.push_back(num(item));
    return out;
  }

  std::vector<std::pair<double, double>> pairs(const std::string& v) const {
    std::vector<std::pair<double, double>> out;
    for (const auto& item : split(v, ',')) {
      const auto parts = split(item, ':');
      if (parts.size() != 2) fail("expected a:b items, got '" + item + "'");
      out.emplace_back(num(parts[0]), num(parts[1]));
    }
    return out;
  }

  fs::path path(const std::string& v) const {
    const fs::path p(trim(v));
    if (p.empty()) fail("empty path");
    return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
  }

  std::vector<fs::path> paths(const std::string& v) const {
    std::vector<fs::path> out;
    for (const auto& item : split(v, ',')) out.push_back(path(item));
    return out;
  }
};

using Setter = std::function<void(RunConfig&, const std::string&, const Ctx&)>;
using Section = std::map<std::string, Setter, std::less<>>;

#define NUM(field) [](RunConfig& c, const std::string& v, const Ctx& x) { c.field = x.num(v); }
#define INT(field) \
  [](RunConfig& c, const std::string& v, const Ctx& x) { c.field = static_cast<int>(x.integer(v)); }

Section dynamics_section() {
  return {
      {"body_mass", NUM(trial.robot.body_mass)},
      {"leg_mass", NUM(trial.robot.leg_mass)},
      {"spring_k", NUM(trial.robot.spring_k)},
      {"hardstop_k", NUM(trial.robot.hardstop_k)},
      {"hardstop_b", NUM(trial.robot.hardstop_b)},
      {"leg_top_to_leg_cm", NUM(trial.robot.leg_top_to_leg_cm)},
      {"leg_bottom_to_leg_cm", NUM(trial.robot.leg_bottom_to_leg_cm)},
      {"body_cm_below_leg_top", NUM(trial.robot.body_cm_below_leg_top)},
      {"gravity", NUM(trial.robot.gravity)},
      {"spring_preload", NUM(trial.robot.spring_preload)},
      {"spring_damping", NUM(trial.robot.spring_damping)},
      {"duration", NUM(trial.duration)},
      {"control_rate", NUM(trial.control_rate)},
      {"seed", [](RunConfig& c, const std::string& v, const Ctx& x) { c.trial.seed = x.seed(v); }},
      {"control_source",
       [](RunConfig& c, const std::string& v, const Ctx& x) {
         const auto s = control_source_from_string(trim(v));
         if (!s) x.fail("expected gt or se, got '" + v + "'");
         c.trial.control = *s;
       }},
      {"height",
       [](RunConfig& c, const std::string& v, const Ctx& x) {
         c.trial.schedule = HeightSchedule::constant(x.num(v));
       }},
      {"schedule",
       [](RunConfig& c, const std::string& v, const Ctx& x) {
         c.trial.schedule.steps = x.pairs(v);
       }},
  };
}

Section sensing_section() {
  return {
      {"lowg_range", NUM(trial.sensing.lowg_range)},
      {"highg_range", NUM(trial.sensing.highg_range)},
      {"lowg_noise_std", NUM(trial.sensing.lowg_noise_std)},
      {"highg_noise_std", NUM(trial.sensing.highg_noise_std)},
      {"bias", NUM(trial.sensing.bias)},
      {"sensor_rate", NUM(trial.sensing.sensor_rate)},
      {"est_rate", NUM(trial.sensing.est_rate)},
  };
}

Section hpe_section() {
  return {
      {"jerk_window", INT(trial.jerk_window)},
      {"jerk_threshold", NUM(trial.jerk_threshold)},
  };
}

Section trainer_section() {
  Section s = {
      {"population", INT(train.ga.population)},
      {"generations", INT(train.ga.generations)},
      {"elite_frac", NUM(train.ga.elite_frac)},
      {"crossover_frac", NUM(train.ga.crossover_frac)},
      {"mutation_frac", NUM(train.ga.mutation_frac)},
      {"alpha0", NUM(train.ga.alpha0)},
      {"alpha_relative",
       [](RunConfig& c, const std::string& v, const Ctx& x) {
         c.train.ga.alpha_relative = x.boolean(v);
       }},
      {"seed", [](RunConfig& c, const std::string& v, const Ctx& x) { c.train.ga.seed = x.seed(v); }},
      {"heights",
       [](RunConfig& c, const std::string& v, const Ctx& x) {
         c.train.synthesis.heights = x.nums(v);
       }},
      {"hops_per_height", INT(train.synthesis.hops_per_height)},
      {"trial_duration", NUM(train.synthesis.trial_duration)},
      {"synthesis_seed",
       [](RunConfig& c, const std::string& v, const Ctx& x) {
         c.train.synthesis.seed = x.seed(v);
       }},
      {"logs", [](RunConfig& c, const std::string& v, const Ctx& x) { c.train.logs = x.paths(v); }},
      {"margin", NUM(train.margin)},
      {"subset",
       [](RunConfig& c, const std::string& v, const Ctx& x) {
         c.train.subset.clear();
         for (const auto& [h, n] : x.pairs(v)) {
           if (n < 0 || n != static_cast<int>(n)) x.fail("hop counts must be whole and >= 0");
           c.train.subset[h] = static_cast<int>(n);
         }
       }},
      {"subset_seed",
       [](RunConfig& c, const std::string& v, const Ctx& x) { c.train.subset_seed = x.seed(v); }},
  };
  for (int i = 0; i < kParamCount; ++i) {
    const auto id = static_cast<ParamId>(i);
    s[std::string(param_name(id)) + "_bounds"] =
        [i](RunConfig& c, const std::string& v, const Ctx& x) {
          const auto lh = x.nums(v);
          if (lh.size() != 2 || !(lh[0] <= lh[1])) x.fail("expected 'lo, hi' with lo <= hi");
          c.train.ga.bounds[i] = {lh[0], lh[1]};
        };
  }
  return s;
}

Section metrics_section() {
  return {
      {"aerial_only",
       [](RunConfig& c, const std::string& v, const Ctx& x) { c.aerial_only = x.boolean(v); }},
      {"logs", [](RunConfig& c, const std::string& v, const Ctx& x) { c.logs = x.paths(v); }},
  };
}

Section cli_section() {
  return {
      {"out_dir", [](RunConfig& c, const std::string& v, const Ctx& x) { c.out_dir = x.path(v); }},
      {"threads", INT(threads)},
      {"agility_inputs",
       [](RunConfig& c, const std::string& v, const Ctx& x) { c.agility_inputs = x.path(v); }},
      {"sweep_frequencies",
       [](RunConfig& c, const std::string& v, const Ctx& x) { c.sweep.frequencies = x.nums(v); }},
      {"sweep_height", NUM(sweep.height)},
      {"sweep_duration", NUM(sweep.duration)},
      {"sweep_control_rate", NUM(sweep.control_rate)},
      {"sweep_seeds", INT(sweep.noisy_seeds)},
      {"sweep_bin", NUM(sweep.bin)},
      {"sweep_tail", NUM(sweep.tail)},
  };
}

#undef NUM
#undef INT

std::optional<ImuptKind> imupt_from_string(std::string_view s) {
  for (auto k : {ImuptKind::kPositionTd, ImuptKind::kPositionLo, ImuptKind::kVelocityMs,
                 ImuptKind::kVelocityLo, ImuptKind::kAccelBiasAerial}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

void require_file(const fs::path& p, const std::string& what) {
  if (!fs::is_regular_file(p)) {
    throw ConfigError(what + ": file not found: " + p.string());
  }
}

}  // namespace

RunConfig parse_run_config(std::istream& is, const std::string& source,
                           const fs::path& base_dir) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
  }

  const std::map<std::string, Section, std::less<>> sections = {
      {"dynamics", dynamics_section()}, {"sensing", sensing_section()},
      {"hpe", hpe_section()},           {"trainer", trainer_section()},
      {"metrics", metrics_section()},   {"cli", cli_section()},
  };

  RunConfig cfg;
  std::map<ParamId, double> param_keys;
  bool filter_given = false;
  for (const auto& [sec_name, sec] : tree) {
    if (sec.empty() && !sec.data().empty()) {
      throw ConfigError(source + ": key '" + sec_name + "' outside of a section");
    }
    const auto s = sections.find(sec_name);
    if (s == sections.end() && sec_name != "hvse") {
      throw ConfigError(source + ": unknown section [" + sec_name + "]");
    }
    for (const auto& [key, node] : sec) {
      const Ctx ctx{source + ": [" + sec_name + "] " + key, base_dir};
      const std::string value = node.data();
      if (sec_name == "hvse") {
        if (key == "filter") {
          const auto k = filter_kind_from_string(trim(value));
          if (!k) ctx.fail("expected kf1, kf2, eskf1 or eskf2, got '" + value + "'");
          cfg.trial.kind = *k;
          filter_given = true;
        } else if (key == "params_file") {
          cfg.params_file = ctx.path(value);
        } else if (key == "imupts") {
          ImuptMask mask = 0;
          for (const auto& item : split(value, ',')) {
            if (item.empty() || item == "none") continue;
            const auto k = imupt_from_string(item);
            if (!k) ctx.fail("unknown IMUPT '" + item + "'");
            mask |= imupt_bit(*k);
          }
          cfg.trial.imupts = mask;
        } else if (const auto id = param_from_name(key)) {
          param_keys[*id] = ctx.num(value);
        } else {
          ctx.fail("unknown key");
        }
        continue;
      }
      const auto setter = s->second.find(key);
      if (setter == s->second.end()) ctx.fail("unknown key");
      setter->second(cfg, value, ctx);
    }
  }

  if (cfg.params_file) {
    require_file(*cfg.params_file, source + ": [hvse] params_file");
    const ParamsFile pf = read_params_json(*cfg.params_file, cfg.trial.est);
    cfg.trial.est = pf.params;
    if (!filter_given) cfg.trial.kind = pf.kind;
  }
  for (const auto& [id, v] : param_keys) cfg.trial.est[id] = v;

  auto check = [&](const std::string& section, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      throw ConfigError(source + ": [" + section + "] " + e.what());
    }
  };
  check("dynamics", [&] {
    cfg.trial.robot.validate();
    cfg.trial.schedule.validate();
    if (!(cfg.trial.duration > 0.0)) throw ConfigError("duration must be positive");
  });
  check("sensing", [&] { cfg.trial.sensing.validate(); });
  check("hpe", [&] {
    if (cfg.trial.jerk_window < 2 || cfg.trial.jerk_window > kMaxJerkWindow) {
      throw ConfigError("jerk_window must lie in [2, " + std::to_string(kMaxJerkWindow) + "]");
    }
  });
  check("hvse", [&] { cfg.trial.est.validate(); });
  check("trainer", [&] {
    cfg.train.ga.validate();
    if (cfg.train.synthesis.hops_per_height < 1) throw ConfigError("hops_per_height must be >= 1");
    if (cfg.train.synthesis.heights.empty()) throw ConfigError("heights must not be empty");
  });
  check("cli", [&] {
    if (cfg.sweep.frequencies.empty()) throw ConfigError("sweep_frequencies must not be empty");
    for (double f : cfg.sweep.frequencies) {
      if (!(f > 0.0)) throw ConfigError("sweep frequencies must be positive");
    }
    if (cfg.sweep.noisy_seeds < 1) throw ConfigError("sweep_seeds must be >= 1");
    if (!(cfg.sweep.bin > 0.0) || !(cfg.sweep.tail > 0.0)) {
      throw ConfigError("sweep_bin and sweep_tail must be positive");
    }
    if (cfg.threads < 0) throw ConfigError("threads must be >= 0");
  });
  for (const auto& p : cfg.train.logs) require_file(p, source + ": [trainer] logs");
  for (const auto& p : cfg.logs) require_file(p, source + ": [metrics] logs");
  if (cfg.agility_inputs) require_file(*cfg.agility_inputs, source + ": [cli] agility_inputs");
  cfg.train.synthesis.trial = cfg.trial;
  cfg.train.ga.threads = cfg.threads;
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  return parse_run_config(in, path.string(), path.parent_path());
}

void override_seed(RunConfig& cfg, std::uint64_t seed) {
  cfg.trial.seed = seed;
  cfg.train.synthesis.trial.seed = seed;
  cfg.train.synthesis.seed = seed;
  cfg.train.ga.seed = seed;
  cfg.train.subset_seed = seed;
}

ParamsFile read_params_json(const fs::path& path, const EstimatorParams& defaults) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open parameter file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  ParamsFile pf;
  pf.params = defaults;
  try {
    if (j.contains("filter")) {
      const auto k = filter_kind_from_string(j.at("filter").get<std::string>());
      if (!k) throw ConfigError("unknown filter kind");
      pf.kind = *k;
    }
    for (const auto& [name, value] : j.at("params").items()) {
      const auto id = param_from_name(name);
      if (!id) throw ConfigError("unknown parameter '" + name + "'");
      pf.params[*id] = value.get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return pf;
}

std::string params_json(const ParamsFile& pf) {
  nlohmann::ordered_json j;
  j["filter"] = std::string(to_string(pf.kind));
  nlohmann::ordered_json params;
  for (int i = 0; i < kParamCount; ++i) {
    const auto id = static_cast<ParamId>(i);
    params[std::string(param_name(id))] = pf.params[id];
  }
  j["params"] = params;
  return j.dump(2) + "\n";
}

void write_params_json(const ParamsFile& pf, const fs::path& path) {
  write_file_atomic(path, params_json(pf));
}

}  // namespace hopest
