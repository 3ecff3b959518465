// Copyright 2026 The odli-reach Authors
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

#include "odli/error.hpp"
#include "odli/io.hpp"
#include "odli/pipeline.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

namespace odli
{
namespace
{

std::vector<std::vector<std::string>> parse_csv(const std::string & text)
{
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string text_of(const Table & t)
{
  std::ostringstream out;
  t.write(out);
  return out.str();
}

ErrorCode code_of(const std::function<void()> & f)
{
  try {
    f();
  } catch (const Error & e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

std::string message_of(const std::function<void()> & f)
{
  try {
    f();
  } catch (const Error & e) {
    return e.what();
  }
  return {};
}

TrajectoryLog sample_log()
{
  RunConfig config = default_run_config();
  config.scenario.incursion_level = -0.8;
  PolicySpec p;
  p.kind = PolicyKind::brake_then_steer_center;
  return simulate_single(config, p, "sample");
}

TEST(LogIo, RoundTripIsLossless)
{
  const auto log = sample_log();
  std::ostringstream table, meta;
  write_trajectory_log(log, table, meta);
  std::istringstream in(table.str());
  const auto meta_text = meta.str();
  const auto back = read_trajectory_log(in, &meta_text);
  ASSERT_EQ(back.samples.size(), log.samples.size());
  EXPECT_EQ(back.dt, log.dt);
  EXPECT_EQ(back.t_T, log.t_T);
  EXPECT_EQ(back.label, log.label);
  EXPECT_EQ(back.scenario.incursion_level, -0.8);
  EXPECT_TRUE(back.has_sv_accel);
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); };
  for (std::size_t i = 0; i < log.samples.size(); ++i) {
    const auto & a = log.samples[i];
    const auto & b = back.samples[i];
    ASSERT_TRUE(close(a.t, b.t));
    ASSERT_TRUE(close(a.sv.x, b.sv.x) && close(a.sv.y, b.sv.y) && close(a.sv.vx, b.sv.vx));
    ASSERT_TRUE(close(a.sv.vy, b.sv.vy) && close(a.sv.ax, b.sv.ax) && close(a.sv.ay, b.sv.ay));
    ASSERT_TRUE(close(a.pov.x, b.pov.x) && close(a.pov.y, b.pov.y) && close(a.pov.vx, b.pov.vx));
    ASSERT_TRUE(close(a.controls.accel_pct, b.controls.accel_pct));
    ASSERT_TRUE(close(a.controls.brake_pct, b.controls.brake_pct));
    ASSERT_TRUE(close(a.controls.steer_deg, b.controls.steer_deg));
  }
}

TEST(LogIo, FileRoundTripUsesSidecar)
{
  const auto dir = std::filesystem::temp_directory_path() / "odli_io_test";
  std::filesystem::remove_all(dir);
  const auto path = (dir / "run.csv").string();
  const auto log = sample_log();
  save_trajectory_log(log, path);
  EXPECT_TRUE(std::filesystem::exists(sidecar_path(path)));
  const auto back = load_trajectory_log(path);
  EXPECT_EQ(back.samples.size(), log.samples.size());
  EXPECT_EQ(classify_outcome(back).outcome, classify_outcome(log).outcome);
  std::filesystem::remove_all(dir);
}

const char * kHeader = "t,sv_x,sv_y,sv_vx,sv_vy,sv_ax,sv_ay,pov_x,pov_y,pov_vx,pov_vy,accel_pct,brake_pct,steer_deg\n";

TEST(LogIo, MissingColumnNamed)
{
  std::istringstream in("t,sv_x,sv_y,sv_vx,sv_vy,pov_x,pov_y,pov_vx,pov_vy,accel_pct,brake_pct\n0,0,0,0,0,0,0,0,0,0,0\n");
  const auto msg = message_of([&] { read_trajectory_log(in, nullptr); });
  EXPECT_NE(msg.find("steer_deg"), std::string::npos) << msg;
  std::istringstream again("t,sv_x\n0,0\n");
  EXPECT_EQ(code_of([&] { read_trajectory_log(again, nullptr); }), ErrorCode::parse);
}

TEST(LogIo, VelocityOnlyLogAccepted)
{
  std::string text = "t,sv_x,sv_y,sv_vx,sv_vy,pov_x,pov_y,pov_vx,pov_vy,accel_pct,brake_pct,steer_deg\n";
  for (int k = 0; k < 50; ++k) {
    const double t = k * 0.02;
    const double vx = 17.0 - 2.0 * t;
    text += format_number(t) + ",0,-1.8," + format_number(vx) + ",0,200,1.8,-17,0,3,0,0\n";
  }
  std::istringstream in(text);
  const auto log = read_trajectory_log(in, nullptr);
  EXPECT_FALSE(log.has_sv_accel);
  EXPECT_NEAR(log.dt, 0.02, 1e-12);
  const auto ax = sv_longitudinal_accel(log);
  EXPECT_NEAR(ax[25], -2.0, 1e-6);
}

TEST(LogIo, NonMonotoneAndMixedSpacingRejectedWithRow)
{
  std::string text = kHeader;
  text += "s,m,m,m/s,m/s,m/s^2,m/s^2,m,m,m/s,m/s,%,%,deg\n";
  text += "0,0,0,1,0,0,0,9,1,-1,0,3,0,0\n0.1,0,0,1,0,0,0,9,1,-1,0,3,0,0\n0.05,0,0,1,0,0,0,9,1,-1,0,3,0,0\n";
  std::istringstream in(text);
  const auto msg = message_of([&] { read_trajectory_log(in, nullptr); });
  EXPECT_NE(msg.find("row 5"), std::string::npos) << msg;

  std::string mixed = kHeader;
  mixed += "0,0,0,1,0,0,0,9,1,-1,0,3,0,0\n0.1,0,0,1,0,0,0,9,1,-1,0,3,0,0\n0.25,0,0,1,0,0,0,9,1,-1,0,3,0,0\n";
  std::istringstream in2(mixed);
  const auto msg2 = message_of([&] { read_trajectory_log(in2, nullptr); });
  EXPECT_NE(msg2.find("row 4"), std::string::npos) << msg2;
  std::istringstream in3(mixed);
  EXPECT_EQ(code_of([&] { read_trajectory_log(in3, nullptr); }), ErrorCode::parse);

  std::string bad = kHeader;
  bad += "0,0,0,1,0,0,0,9,1,-1,0,3,0,nan\n";
  std::istringstream in4(bad);
  EXPECT_NE(message_of([&] { read_trajectory_log(in4, nullptr); }).find("steer_deg"), std::string::npos);
}

TEST(LogIo, MissingFileIsIoError)
{
  EXPECT_EQ(code_of([] { load_trajectory_log("/nonexistent/dir/log.csv"); }), ErrorCode::io);
}

TEST(ConfigIo, RoundTripAndNamedDefaults)
{
  auto config = default_run_config();
  config.scenario.incursion_level = 0.9;
  config.prediction.grid_dx = 0.25;
  config.seed = 123;
  const auto text = config_to_json(config);
  const auto back = config_from_json(text);
  EXPECT_EQ(config_to_json(back), text);
  EXPECT_EQ(back.cohort_size(), 20);
  for (const char * key : {"\"time_gap_trigger\": 5.15", "\"onset_delay\": 0.4", "\"brake_onset_pct\": 15.0",
                           "\"accel_release_pct\": 3.0", "\"steer_onset_deg\": 5.0", "\"j_bwd_max\": 30.0",
                           "\"a_lat_right_max\": 0.0", "\"horizon\": 4.0"}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
}

TEST(ConfigIo, StrictKeysWithContext)
{
  const auto msg = message_of([] { config_from_json(R"({"scenario": {"incursion_levle": 0.2}})"); });
  EXPECT_NE(msg.find("config.scenario.incursion_levle"), std::string::npos) << msg;
  EXPECT_EQ(code_of([] { config_from_json(R"({"seed": "one"})"); }), ErrorCode::parse);
  EXPECT_EQ(code_of([] { config_from_json("{not json"); }), ErrorCode::parse);
  EXPECT_EQ(code_of([] { config_from_json(R"({"scenario": {"incursion_level": 3}})"); }), ErrorCode::parse);
  EXPECT_EQ(code_of([] { config_from_json(R"({"sv_policy": {"kind": "teleport"}})"); }), ErrorCode::parse);
  const auto partial = config_from_json(R"({"scenario": {"incursion_level": -0.8}})");
  EXPECT_EQ(partial.scenario.incursion_level, -0.8);
  EXPECT_EQ(partial.scenario.time_gap_trigger, 5.15);
}

TEST(Tables, SelfDescribingHeaders)
{
  Table t({"a", "b"}, {"s", "m"});
  t.add_row({"1", "2"});
  const auto rows = parse_csv(text_of(t));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][0], "a");
  EXPECT_EQ(rows[1][1], "m");
  EXPECT_THROW(t.add_row({"1"}), Error);
  EXPECT_THROW(Table({"a"}, {}), Error);
}

TEST(Tables, NumberFormatting)
{
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(184.164), "184.164");
  EXPECT_EQ(format_optional(std::nullopt), "");
}

TEST(Tables, EmptyDrivableLayerKeepsPovLayers)
{
  RunConfig config = default_run_config();
  WorldState world;
  world.sv = VehicleState{0.0, 0.0, -1.825, 17.88, 0, 0, 0, +1};
  world.pov = VehicleState{0.0, 20.0, -1.825, -17.88, 0, 0, 0, -1};
  const auto area = compute_drivable_area(world, PovPredictionMode::kinematic_envelope, config.scenario, config.prediction);
  ASSERT_FALSE(area.exists);
  const auto rows = parse_csv(text_of(reach_snapshot_table(area)));
  bool pov_rows = false;
  std::map<std::string, int> last_layer;
  for (std::size_t i = 2; i < rows.size(); ++i) {
    pov_rows = pov_rows || rows[i][0] == "pov";
    last_layer[rows[i][0]] = std::max(last_layer[rows[i][0]], std::stoi(rows[i][1]));
  }
  EXPECT_TRUE(pov_rows);
  EXPECT_LT(last_layer["sv"], last_layer["pov"]);
  const auto svg = reach_snapshot_svg(area, world, config.scenario);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("#0b2a6f"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Tables, SequenceGraphSumsRecomputedFromFile)
{
  RunConfig config = default_run_config();
  config.reaction_jitter = 0.3;
  const auto logs = simulate_cohort(config);
  const auto graph = analyze_sequence(logs, config.analysis);
  const auto rows = parse_csv(text_of(sequence_graph_table(graph)));
  ASSERT_EQ(rows[0][0], "record");
  std::map<std::string, long> in, out, initial;
  std::vector<std::string> nodes;
  for (std::size_t i = 2; i < rows.size(); ++i) {
    if (rows[i][0] == "node") {
      nodes.push_back(rows[i][1]);
      initial[rows[i][1]] = std::stol(rows[i][4]);
    } else {
      ASSERT_NE(rows[i][1], rows[i][2]);
      const long c = std::stol(rows[i][3]);
      out[rows[i][1]] += c;
      in[rows[i][2]] += c;
    }
  }
  long terminal = 0;
  for (const auto & n : nodes) {
    if (n == "collision" || n.rfind("pass", 0) == 0) {
      terminal += in[n];
      EXPECT_EQ(out[n], 0);
    } else {
      EXPECT_EQ(in[n] + initial[n], out[n]) << n;
    }
  }
  EXPECT_EQ(terminal, static_cast<long>(logs.size()));
}

TEST(Files, UnwritablePathIsIoError)
{
  EXPECT_EQ(code_of([] { write_text_file("/proc/odli/nope.txt", "x"); }), ErrorCode::io);
  EXPECT_EQ(code_of([] { read_text_file("/nonexistent/odli.txt"); }), ErrorCode::io);
}

}  // namespace
}  // namespace odli
