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

#include <gtest/gtest.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "hopest/errors.hpp"
#include "hopest/hop_log.hpp"
#include "hopest/simulation.hpp"

using namespace hopest;
namespace fs = std::filesystem;

namespace {

const char* kHeader =
    "t,z_true,v_true,a_true,a_lowg,a_highg,a_world_est,phase,event,z_est,"
    "v_est,P00,P01,P11,twr,h_desired";

std::string error_of(const std::string& csv) {
  std::istringstream is(csv);
  try {
    read_csv(is);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch_dir(const char* name) {
  const fs::path d = fs::temp_directory_path() / ("hopest_test_" + std::string(name));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST(HopLogCsv, SimulatedLogRoundTripsExactly) {
  TrialConfig tc;
  tc.duration = 3.0;
  const HopLog log = simulate_trial(tc);
  std::stringstream ss;
  write_csv(log, ss);
  const HopLog back = read_csv(ss);
  EXPECT_EQ(back.rows, log.rows);
  EXPECT_EQ(back.est_rate, 840.0);
  EXPECT_TRUE(back.has_contact);
  std::stringstream again;
  write_csv(back, again);
  std::stringstream first;
  write_csv(log, first);
  EXPECT_EQ(again.str(), first.str());
}

TEST(HopLogCsv, HeaderListsColumnsInOrder) {
  std::stringstream ss;
  write_csv(HopLog{}, ss);
  EXPECT_EQ(ss.str(), std::string(kHeader) + ",contact\n");
}

TEST(HopLogCsv, ContactColumnIsOptional) {
  const std::string csv = std::string(kHeader) +
                          "\n0,1,0,-9.81,0,0,-9.81,drop,,1,0,0,0,0,0,1\n"
                          "0.5,0.2,0,0,0,0,0,stance_down,TD,0.2,0,0,0,0,0,1\n";
  std::istringstream is(csv);
  const HopLog log = read_csv(is);
  EXPECT_FALSE(log.has_contact);
  ASSERT_EQ(log.rows.size(), 2u);
  EXPECT_EQ(log.rows[1].event, TransitionKind::kTouchdown);
  EXPECT_EQ(log.rows[1].phase, Phase::kStanceDown);
  EXPECT_EQ(log.est_rate, 2.0);
}

TEST(HopLogCsv, ColumnsMayBeReordered) {
  const std::string csv =
      "z_true,t,v_true,a_true,a_lowg,a_highg,a_world_est,phase,event,z_est,"
      "v_est,P00,P01,P11,twr,h_desired\n"
      "1.5,0.25,0,0,0,0,0,rebound,HA,1.4,0,0,0,0,0,2\n";
  std::istringstream is(csv);
  const HopLog log = read_csv(is);
  EXPECT_EQ(log.rows[0].t, 0.25);
  EXPECT_EQ(log.rows[0].z_true, 1.5);
  EXPECT_EQ(log.rows[0].h_desired, 2.0);
}

TEST(HopLogCsv, MissingColumnIsNamed) {
  const std::string msg = error_of("t,z_true\n0,1\n");
  EXPECT_NE(msg.find("line 1"), std::string::npos);
  EXPECT_NE(msg.find("v_true"), std::string::npos);
}

TEST(HopLogCsv, BadNumberNamesLineAndColumn) {
  const std::string msg = error_of(std::string(kHeader) +
                                   "\n0,1,0,0,0,0,0,drop,,1,0,0,0,0,0,1\n"
                                   "1,x,0,0,0,0,0,drop,,1,0,0,0,0,0,1\n");
  EXPECT_NE(msg.find("line 3"), std::string::npos);
  EXPECT_NE(msg.find("z_true"), std::string::npos);
}

TEST(HopLogCsv, RejectsUnknownPhaseAndEvent) {
  EXPECT_NE(error_of(std::string(kHeader) + "\n0,1,0,0,0,0,0,hover,,1,0,0,0,0,0,1\n")
                .find("phase"),
            std::string::npos);
  EXPECT_NE(error_of(std::string(kHeader) + "\n0,1,0,0,0,0,0,drop,XX,1,0,0,0,0,0,1\n")
                .find("event"),
            std::string::npos);
}

TEST(HopLogCsv, RejectsWrongFieldCountAndTimeReversal) {
  EXPECT_NE(error_of(std::string(kHeader) + "\n0,1,0\n").find("fields"), std::string::npos);
  EXPECT_NE(error_of(std::string(kHeader) +
                     "\n1,1,0,0,0,0,0,drop,,1,0,0,0,0,0,1\n"
                     "1,1,0,0,0,0,0,drop,,1,0,0,0,0,0,1\n")
                .find("increasing"),
            std::string::npos);
  EXPECT_FALSE(error_of("").empty());
}

TEST(HopLogCsv, AcceptsCrlf) {
  const std::string csv = std::string(kHeader) +
                          "\r\n0,1,0,0,0,0,0,drop,,1,0,0,0,0,0,1\r\n";
  std::istringstream is(csv);
  EXPECT_EQ(read_csv(is).rows.size(), 1u);
}

TEST(FormatDouble, ShortestRoundTrip) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10000; ++i) {
    const std::uint64_t bits = rng();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    if (!std::isfinite(v)) continue;
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(840.0), "840");
}

TEST(InferRate, FromTimestamps) {
  std::vector<LogRow> rows(5);
  for (int i = 0; i < 5; ++i) rows[i].t = i / 400.0;
  EXPECT_EQ(infer_est_rate(rows), 400.0);
  EXPECT_THROW(infer_est_rate({LogRow{}}), DataError);
}

TEST(Files, AtomicWriteLeavesNoTemporary) {
  const fs::path d = scratch_dir("atomic");
  write_file_atomic(d / "a.txt", "first");
  write_file_atomic(d / "a.txt", "second");
  std::ifstream is(d / "a.txt");
  std::string s;
  std::getline(is, s);
  EXPECT_EQ(s, "second");
  EXPECT_FALSE(fs::exists(d / "a.txt.tmp"));
  fs::remove_all(d);
}

TEST(Files, LogFileRoundTripAndMissingFile) {
  const fs::path d = scratch_dir("logfile");
  TrialConfig tc;
  tc.duration = 1.0;
  const HopLog log = simulate_trial(tc);
  write_csv_file(log, d / "trial.csv");
  EXPECT_EQ(read_csv_file(d / "trial.csv").rows, log.rows);
  try {
    read_csv_file(d / "missing.csv");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("missing.csv"), std::string::npos);
  }
  fs::remove_all(d);
}
