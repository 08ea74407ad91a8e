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

#include "hopest/hop_log.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "hopest/errors.hpp"

namespace hopest {

namespace {

enum Col {
  kT, kZTrue, kVTrue, kATrue, kALowg, kAHighg, kAWorldEst, kPhase, kEvent,
  kZEst, kVEst, kP00, kP01, kP11, kTwr, kHDesired, kContact, kNumCols
};

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

[[noreturn]] void bad_line(size_t line_no, const std::string& what) {
  std::ostringstream os;
  os << "log line " << line_no << ": " << what;
  throw DataError(os.str());
}

double parse_double(std::string_view s, size_t line_no, std::string_view col) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    bad_line(line_no, "bad number in column " + std::string(col) + ": '" +
                          std::string(s) + "'");
  }
  return v;
}

}  // namespace

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "t",     "z_true", "v_true", "a_true", "a_lowg", "a_highg",
      "a_world_est", "phase", "event", "z_est", "v_est", "P00",
      "P01",   "P11",    "twr",    "h_desired", "contact"};
  return cols;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_csv(const HopLog& log, std::ostream& os) {
  const auto& cols = csv_columns();
  for (size_t i = 0; i < cols.size(); ++i) {
    if (i) os << ',';
    os << cols[i];
  }
  os << '\n';
  for (const LogRow& r : log.rows) {
    os << format_double(r.t) << ',' << format_double(r.z_true) << ','
       << format_double(r.v_true) << ',' << format_double(r.a_true) << ','
       << format_double(r.a_lowg) << ',' << format_double(r.a_highg) << ','
       << format_double(r.a_world_est) << ',' << to_string(r.phase) << ','
       << (r.event ? to_string(*r.event) : std::string_view()) << ','
       << format_double(r.z_est) << ',' << format_double(r.v_est) << ','
       << format_double(r.P00) << ',' << format_double(r.P01) << ','
       << format_double(r.P11) << ',' << format_double(r.twr) << ','
       << format_double(r.h_desired) << ',' << (r.contact ? 1 : 0) << '\n';
  }
}

HopLog read_csv(std::istream& is) {
  std::string line;
  size_t line_no = 1;
  if (!std::getline(is, line)) throw DataError("log is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line, ',');
  const auto& cols = csv_columns();
  int index[kNumCols];
  for (int c = 0; c < kNumCols; ++c) index[c] = -1;
  for (size_t i = 0; i < header.size(); ++i) {
    for (int c = 0; c < kNumCols; ++c) {
      if (header[i] == cols[c]) index[c] = static_cast<int>(i);
    }
  }
  for (int c = 0; c < kContact; ++c) {
    if (index[c] < 0) bad_line(line_no, "missing column " + cols[c]);
  }

  HopLog log;
  log.has_contact = index[kContact] >= 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != header.size()) {
      bad_line(line_no, "expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(f.size()));
    }
    auto num = [&](Col c) {
      return parse_double(f[index[c]], line_no, cols[c]);
    };
    LogRow r;
    r.t = num(kT);
    r.z_true = num(kZTrue);
    r.v_true = num(kVTrue);
    r.a_true = num(kATrue);
    r.a_lowg = num(kALowg);
    r.a_highg = num(kAHighg);
    r.a_world_est = num(kAWorldEst);
    const auto phase = phase_from_string(f[index[kPhase]]);
    if (!phase) bad_line(line_no, "unknown phase '" + std::string(f[index[kPhase]]) + "'");
    r.phase = *phase;
    const std::string_view ev = f[index[kEvent]];
    if (!ev.empty()) {
      r.event = transition_from_string(ev);
      if (!r.event) bad_line(line_no, "unknown event '" + std::string(ev) + "'");
    }
    r.z_est = num(kZEst);
    r.v_est = num(kVEst);
    r.P00 = num(kP00);
    r.P01 = num(kP01);
    r.P11 = num(kP11);
    r.twr = num(kTwr);
    r.h_desired = num(kHDesired);
    if (log.has_contact) r.contact = num(kContact) != 0.0;
    if (!log.rows.empty() && !(r.t > log.rows.back().t)) {
      bad_line(line_no, "time is not strictly increasing");
    }
    log.rows.push_back(r);
  }
  if (log.rows.size() >= 2) log.est_rate = infer_est_rate(log.rows);
  return log;
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw DataError("cannot write " + tmp.string());
    os << content;
    if (!os) throw DataError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw DataError("cannot rename into " + path.string() + ": " + ec.message());
}

void write_csv_file(const HopLog& log, const std::filesystem::path& path) {
  std::ostringstream os;
  write_csv(log, os);
  write_file_atomic(path, os.str());
}

HopLog read_csv_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open log " + path.string());
  try {
    return read_csv(is);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

double infer_est_rate(const std::vector<LogRow>& rows) {
  if (rows.size() < 2) throw DataError("log too short to infer its rate");
  const double mean_dt =
      (rows.back().t - rows.front().t) / static_cast<double>(rows.size() - 1);
  return std::round(1.0 / mean_dt);
}

std::vector<TrueTransition> detect_true_transitions(const HopLog& log,
                                                    const RobotParams& rp) {
  std::vector<TrueTransition> out;
  const double h_contact = rp.contact_height();
  auto in_contact = [&](const LogRow& r) {
    return log.has_contact ? r.contact : r.z_true <= h_contact;
  };
  bool awaiting_ms = false;
  for (size_t i = 1; i < log.rows.size(); ++i) {
    const LogRow& prev = log.rows[i - 1];
    const LogRow& cur = log.rows[i];
    const bool c_prev = in_contact(prev);
    const bool c_cur = in_contact(cur);
    if (!c_prev && c_cur) {
      out.push_back({TransitionKind::kTouchdown, cur.t, cur.z_true, cur.v_true});
      awaiting_ms = true;
    }
    if (c_cur && awaiting_ms && cur.v_true >= 0.0) {
      out.push_back({TransitionKind::kMaxSquat, cur.t, cur.z_true, cur.v_true});
      awaiting_ms = false;
    }
    if (c_prev && !c_cur) {
      out.push_back({TransitionKind::kLiftoff, cur.t, cur.z_true, cur.v_true});
      awaiting_ms = false;
    }
    if (!c_prev && !c_cur && prev.v_true > 0.0 && cur.v_true <= 0.0) {
      out.push_back({TransitionKind::kApex, cur.t, cur.z_true, cur.v_true});
    }
  }
  return out;
}

}  // namespace hopest
