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

#include "hopest/commands.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hopest/errors.hpp"
#include "hopest/replay.hpp"
#include "hopest/sweep.hpp"

namespace hopest {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("out_dir " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  try {
    write_file_atomic(path, text);
  } catch (const std::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const Json& j) {
  write_text(path, j.dump(2) + "\n");
}

std::string log_csv(const HopLog& log) {
  std::ostringstream os;
  write_csv(log, os);
  return os.str();
}

Json report_json(const MetricsReport& r) {
  Json j;
  j["M1"] = r.M1;
  j["M2"] = r.M2;
  j["M3"] = r.M3;
  j["M4"] = r.M4;
  j["M5"] = r.M5;
  j["gamma1"] = r.gamma1;
  j["gamma2"] = r.gamma2;
  j["gamma3"] = r.gamma3;
  j["n_hops"] = r.n_hops;
  j["n_apex"] = r.n_apex;
  j["h_g"] = r.h_g;
  j["diagnostics"] = r.diagnostics;
  return j;
}

Json hops_json(const std::vector<HopRecord>& records) {
  Json a = Json::array();
  for (const auto& h : records) {
    Json j;
    j["t_TD"] = h.t_TD;
    j["h_TD"] = h.h_TD;
    j["has_est_apex"] = h.has_est_apex;
    j["t_HA"] = h.t_HA;
    j["h_HA"] = h.h_HA;
    j["has_true_apex"] = h.has_true_apex;
    j["t_HA_true"] = h.t_HA_true;
    j["h_HA_true"] = h.h_HA_true;
    j["h_desired"] = h.h_desired;
    a.push_back(j);
  }
  return a;
}

EstimatorConfig base_estimator(const RunConfig& cfg) {
  return estimator_config(cfg.trial);
}

Dataset load_dataset(const std::vector<fs::path>& logs, double margin,
                     const RobotParams& rp) {
  Dataset ds;
  for (const auto& p : logs) ds.add_source(read_csv_file(p), margin, rp);
  return ds;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

RunConfig resolve_config(const Overrides& o) {
  RunConfig cfg = o.config ? load_run_config(*o.config) : RunConfig{};
  if (o.seed) override_seed(cfg, *o.seed);
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (o.filter) cfg.trial.kind = *o.filter;
  if (o.control) cfg.trial.control = *o.control;
  if (o.threads) {
    if (*o.threads < 0) throw ConfigError("--threads must be >= 0");
    cfg.threads = *o.threads;
  }
  cfg.train.synthesis.trial = cfg.trial;
  cfg.train.ga.threads = cfg.threads;
  return cfg;
}

std::string metrics_csv_header() {
  return "label,M1,M2,M3,M4,M5,gamma1,gamma2,gamma3,n_hops,n_apex,h_g_final\n";
}

std::string metrics_csv_row(const std::string& label, const MetricsReport& r) {
  std::ostringstream os;
  os << label << ',' << format_double(r.M1) << ',' << format_double(r.M2) << ','
     << format_double(r.M3) << ',' << format_double(r.M4) << ','
     << format_double(r.M5) << ',' << format_double(r.gamma1) << ','
     << format_double(r.gamma2) << ',' << format_double(r.gamma3) << ','
     << r.n_hops << ',' << r.n_apex << ','
     << format_double(r.h_g.empty() ? 0.0 : r.h_g.back()) << '\n';
  return os.str();
}

void cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  prepare_out_dir(cfg.out_dir);
  const HopLog log = simulate_trial(cfg.trial);
  write_text(cfg.out_dir / "trial.csv", log_csv(log));

  const auto records = build_hop_records(log, cfg.trial.robot);
  const MetricsReport rep = compute_metrics(records, cfg.aerial_only);
  Json j;
  j["filter"] = std::string(to_string(cfg.trial.kind));
  j["control_source"] = std::string(to_string(cfg.trial.control));
  j["seed"] = cfg.trial.seed;
  j["metrics"] = report_json(rep);
  j["hops"] = hops_json(records);
  write_json(cfg.out_dir / "metrics.json", j);
  write_text(cfg.out_dir / "metrics.csv",
             metrics_csv_header() + metrics_csv_row("trial", rep));
  out << "simulated " << log.rows.size() << " ticks, " << rep.n_hops
      << " hops, M3 = " << rep.M3 << " %\n";
}

void cmd_train(const RunConfig& cfg, std::ostream& out) {
  prepare_out_dir(cfg.out_dir);
  Dataset ds = cfg.train.logs.empty()
                   ? synthesize_dataset(cfg.train.synthesis)
                   : load_dataset(cfg.train.logs, cfg.train.margin, cfg.trial.robot);
  if (!cfg.train.subset.empty()) {
    ds = stratified_subset(ds, cfg.train.subset, cfg.train.subset_seed);
  }
  if (ds.hops.empty()) throw DataError("training dataset is empty");

  const EstimatorConfig base = base_estimator(cfg);
  const GaResult r = run_ga(cfg.train.ga, ds, cfg.trial.kind, base);
  write_params_json({cfg.trial.kind, r.best}, cfg.out_dir / "best_params.json");

  std::ostringstream hist;
  hist << "generation,best,mean,median\n";
  for (const auto& g : r.history) {
    hist << g.generation << ',' << format_double(g.best) << ','
         << format_double(g.mean) << ',' << format_double(g.median) << '\n';
  }
  write_text(cfg.out_dir / "history.csv", hist.str());

  Json j;
  j["filter"] = std::string(to_string(cfg.trial.kind));
  j["hops"] = ds.hops.size();
  j["population"] = cfg.train.ga.population;
  j["generations"] = cfg.train.ga.generations;
  j["seed"] = cfg.train.ga.seed;
  j["L_c"] = r.best_cost.L_c;
  j["gamma1"] = r.best_cost.gamma1;
  j["gamma2"] = r.best_cost.gamma2;
  j["gamma3"] = r.best_cost.gamma3;
  j["n_HA"] = r.best_cost.n_HA;
  j["n_HA_est"] = r.best_cost.n_HA_est;
  j["counts_match"] = r.best_cost.counts_match;
  j["initial_median"] = r.history.front().median;
  write_json(cfg.out_dir / "train_report.json", j);
  out << "trained " << to_string(cfg.trial.kind) << " on " << ds.hops.size()
      << " hops: L_c = " << r.best_cost.L_c << " (initial median "
      << r.history.front().median << ")\n";
}

void cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.logs.empty()) throw ConfigError("[metrics] logs: no logs to evaluate");
  prepare_out_dir(cfg.out_dir);
  const EstimatorConfig est = base_estimator(cfg);
  const RobotParams& rp = cfg.trial.robot;

  struct Variant {
    std::string name;
    std::function<HopLog(const HopLog&)> make;
  };
  const std::vector<Variant> variants = {
      {std::string(to_string(cfg.trial.kind)),
       [&](const HopLog& l) { return replay(l, est); }},
      {"BA1", [&](const HopLog& l) { return baseline_estimates(l, BaselineKind::kBa1, est); }},
      {"DR1", [&](const HopLog& l) { return baseline_estimates(l, BaselineKind::kDr1, est); }},
      {"KF3", [&](const HopLog& l) { return baseline_estimates(l, BaselineKind::kKf3, est); }},
  };

  std::string csv = metrics_csv_header();
  Json logs = Json::array();
  std::map<std::string, std::vector<HopRecord>> pooled;
  for (const auto& path : cfg.logs) {
    const HopLog log = read_csv_file(path);
    Json jl;
    jl["log"] = path.filename().string();
    Json jv;
    for (const auto& v : variants) {
      const auto records = build_hop_records(v.make(log), rp);
      const MetricsReport rep = compute_metrics(records, cfg.aerial_only);
      jv[v.name] = report_json(rep);
      csv += metrics_csv_row(path.filename().string() + ":" + v.name, rep);
      auto& all = pooled[v.name];
      all.insert(all.end(), records.begin(), records.end());
    }
    jl["estimators"] = jv;
    logs.push_back(jl);
  }
  Json jp;
  for (const auto& v : variants) {
    const MetricsReport rep = compute_metrics(pooled[v.name], cfg.aerial_only);
    jp[v.name] = report_json(rep);
    csv += metrics_csv_row("pooled:" + v.name, rep);
    if (v.name == variants.front().name) {
      out << "evaluated " << cfg.logs.size() << " logs, " << rep.n_hops
          << " hops: M1 = " << rep.M1 << " %, M3 = " << rep.M3 << " %\n";
    }
  }
  Json j;
  j["filter"] = std::string(to_string(cfg.trial.kind));
  j["logs"] = logs;
  j["pooled"] = jp;
  write_json(cfg.out_dir / "evaluate.json", j);
  write_text(cfg.out_dir / "evaluate.csv", csv);
}

void cmd_sweep_freq(const RunConfig& cfg, std::ostream& out) {
  prepare_out_dir(cfg.out_dir);
  const auto results = run_sweep(cfg.trial, cfg.sweep, cfg.threads);
  write_text(cfg.out_dir / "sweep_summary.csv", sweep_summary_csv(results));
  write_text(cfg.out_dir / "sweep_bins.csv", sweep_bins_csv(results));
  for (const auto& r : results) {
    out << r.frequency << " Hz: tail std " << r.tail_std_pos << " m"
        << (r.unbounded ? " (unbounded)" : "") << '\n';
  }
}

std::vector<AgilityRowResult> agility_table(std::istream& is) {
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  while (std::getline(is, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_csv(line);
      break;
    }
  }
  if (header.empty()) throw DataError("agility inputs: missing header row");
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  if (!col.count("h1")) throw DataError("agility inputs: header lacks h1");

  std::vector<AgilityRowResult> out;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    AgilityRowResult res;
    res.line = line_no;
    const auto cells = split_csv(line);
    auto cell = [&](const std::string& name) -> std::optional<std::string> {
      const auto it = col.find(name);
      if (it == col.end() || it->second >= cells.size() || cells[it->second].empty()) {
        return std::nullopt;
      }
      return cells[it->second];
    };
    auto num = [&](const std::string& name) -> std::optional<double> {
      const auto c = cell(name);
      if (!c) return std::nullopt;
      double v = 0.0;
      const auto [end, ec] = std::from_chars(c->data(), c->data() + c->size(), v);
      if (ec != std::errc() || end != c->data() + c->size()) {
        throw DataError("column " + name + ": not a number '" + *c + "'");
      }
      return v;
    };
    try {
      res.name = cell("name").value_or("");
      if (cells.size() > header.size()) throw DataError("too many columns");
      const auto h1 = num("h1");
      if (!h1) throw DataError("missing h1");
      const auto t_ap = num("t_apogee");
      const auto t_cy = num("t_cycle");
      if (t_ap && t_cy) {
        res.mode = "measured";
        const DirectAgility d = agility_direct(*h1, *t_ap, *t_cy);
        AgilityResult r;
        r.nu_vja = d.nu_vja;
        r.nu_ha = d.nu_ha;
        const double beta = num("beta").value_or(0.0);
        if (beta != 0.0 && beta != 1.0) throw DataError("beta must be 0 or 1");
        r.nu_uha = beta == 1.0 ? d.nu_ha : d.nu_vja;
        res.result = r;
      } else {
        res.mode = "model";
        AgilityInputs a;
        a.h1 = *h1;
        a.h0 = num("h0").value_or(*h1);
        a.t_s = num("t_s").value_or(0.0);
        a.gamma_r = num("gamma_r").value_or(0.0);
        a.gamma_d = num("gamma_d").value_or(0.0);
        a.gamma_lr = num("gamma_lr").value_or(0.0);
        a.gamma_ld = num("gamma_ld").value_or(0.0);
        a.zeta_s = num("zeta_s").value_or(1.0);
        const double beta = num("beta").value_or(0.0);
        if (beta != 0.0 && beta != 1.0) throw DataError("beta must be 0 or 1");
        a.beta = static_cast<int>(beta);
        a.g = num("g").value_or(9.81);
        res.result = agility(a);
      }
    } catch (const std::exception& e) {
      res.result.reset();
      res.error = e.what();
    }
    out.push_back(res);
  }
  return out;
}

std::string agility_csv(const std::vector<AgilityRowResult>& rows) {
  std::ostringstream os;
  os << "line,name,mode,nu_vja,nu_ha,nu_uha,t_r,t_d,h0_implied,error\n";
  for (const auto& r : rows) {
    os << r.line << ',' << r.name << ',' << r.mode << ',';
    if (r.result) {
      const auto& a = *r.result;
      os << format_double(a.nu_vja) << ',' << format_double(a.nu_ha) << ','
         << format_double(a.nu_uha) << ',' << format_double(a.t_r) << ','
         << format_double(a.t_d) << ',' << format_double(a.h0_implied) << ',';
    } else {
      os << ",,,,,,";
    }
    std::string err = r.error;
    for (char& c : err) {
      if (c == ',' || c == '\n') c = ';';
    }
    os << err << '\n';
  }
  return os.str();
}

bool cmd_agility(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.agility_inputs) throw ConfigError("[cli] agility_inputs: not set");
  std::ifstream in(*cfg.agility_inputs);
  if (!in) throw ConfigError(cfg.agility_inputs->string() + ": cannot open");
  const auto rows = agility_table(in);
  prepare_out_dir(cfg.out_dir);
  write_text(cfg.out_dir / "agility.csv", agility_csv(rows));
  bool ok = true;
  for (const auto& r : rows) {
    if (r.result) {
      out << r.name << ": nu_VJA = " << r.result->nu_vja
          << " m/s, nu_HA = " << r.result->nu_ha << " m/s\n";
    } else {
      ok = false;
      out << "line " << r.line << ": " << r.error << '\n';
    }
  }
  return ok;
}

void cmd_subset(const RunConfig& cfg, std::ostream& out) {
  if (cfg.logs.empty()) throw ConfigError("[metrics] logs: no logs to draw hops from");
  if (cfg.train.subset.empty()) throw ConfigError("[trainer] subset: no hop counts given");
  prepare_out_dir(cfg.out_dir);
  const Dataset ds = load_dataset(cfg.logs, cfg.train.margin, cfg.trial.robot);
  const Dataset sub = stratified_subset(ds, cfg.train.subset, cfg.train.subset_seed);
  Json hops = Json::array();
  for (const auto& h : sub.hops) {
    const HopLog& src = *sub.sources[h.source];
    Json j;
    j["log"] = cfg.logs[h.source].string();
    j["begin"] = h.begin;
    j["end"] = h.end;
    j["t_begin"] = src.rows[h.begin].t;
    j["t_end"] = src.rows[h.end - 1].t;
    j["height"] = h.height;
    hops.push_back(j);
  }
  Json j;
  j["seed"] = cfg.train.subset_seed;
  j["hops"] = hops;
  write_json(cfg.out_dir / "subset.json", j);
  out << "selected " << sub.hops.size() << " of " << ds.hops.size() << " hops\n";
}

}  // namespace hopest
