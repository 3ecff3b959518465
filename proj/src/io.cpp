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

#include "odli/io.hpp"

#include "odli/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace odli
{

using nlohmann::json;

namespace
{

// Visits every serialized field of a struct; the same visitor table drives reading and writing.
class JsonWriter
{
public:
  json value = json::object();

  template <typename T>
  void field(const char * key, const T & v)
  {
    value[key] = v;
  }
  template <typename E, typename ToS, typename Parse>
  void enumeration(const char * key, const E & v, ToS to_s, Parse)
  {
    value[key] = to_s(v);
  }
  template <typename T>
  void object(const char * key, const T & v);
};

class JsonReader
{
public:
  JsonReader(const json & j, std::string context) : j_(j), context_(std::move(context))
  {
    if (!j_.is_object()) fail(ErrorCode::parse, context_ + ": expected an object");
  }

  template <typename T>
  void field(const char * key, T & out)
  {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) fail(ErrorCode::parse, where(key) + ": expected true or false");
      out = it->template get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!it->is_string()) fail(ErrorCode::parse, where(key) + ": expected a string");
      out = it->template get<std::string>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!it->is_number()) fail(ErrorCode::parse, where(key) + ": expected a number");
      out = it->template get<T>();
    } else if constexpr (std::is_unsigned_v<T>) {
      if (!it->is_number_unsigned()) {
        fail(ErrorCode::parse, where(key) + ": expected a non-negative integer");
      }
      out = it->template get<T>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer()) fail(ErrorCode::parse, where(key) + ": expected an integer");
      out = it->template get<T>();
    } else {
      if (!it->is_array()) fail(ErrorCode::parse, where(key) + ": expected an array");
      out.clear();
      for (const auto & e : *it) {
        if (!e.is_number()) fail(ErrorCode::parse, where(key) + ": expected numbers");
        out.push_back(e.template get<double>());
      }
    }
  }

  template <typename E, typename ToS, typename Parse>
  void enumeration(const char * key, E & out, ToS, Parse parse)
  {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    if (!it->is_string()) fail(ErrorCode::parse, where(key) + ": expected a string");
    try {
      out = parse(it->template get<std::string>());
    } catch (const Error & e) {
      fail(ErrorCode::parse, where(key) + ": " + e.what());
    }
  }

  template <typename T>
  void object(const char * key, T & out);

  void finish() const
  {
    for (const auto & item : j_.items()) {
      if (!seen_.count(item.key())) fail(ErrorCode::parse, where(item.key()) + ": unknown key");
    }
  }

  std::string where(const std::string & key) const { return context_ + "." + key; }

private:
  const json & j_;
  std::string context_;
  std::set<std::string> seen_;
};

template <typename V, typename S>
void visit_vehicle(V & v, S & s)
{
  v.field("length", s.length);
  v.field("width", s.width);
  v.field("ref_offset", s.ref_offset);
}

template <typename V, typename S>
void visit_road(V & v, S & s)
{
  v.field("lane_width", s.lane_width);
  v.field("num_lanes", s.num_lanes);
  v.field("shoulder_margin", s.shoulder_margin);
}

template <typename V, typename S>
void visit_scenario(V & v, S & s)
{
  v.field("incursion_level", s.incursion_level);
  v.field("v_sv_nominal", s.v_sv_nominal);
  v.field("v_pov", s.v_pov);
  v.field("time_gap_trigger", s.time_gap_trigger);
  v.field("t_trigger", s.t_trigger);
  v.object("road", s.road);
  v.object("sv_spec", s.sv_spec);
  v.object("pov_spec", s.pov_spec);
  v.enumeration(
    "end_heading_mode", s.end_heading_mode, [](EndHeadingMode m) { return to_string(m); },
    parse_end_heading_mode);
  v.enumeration(
    "post_tc_behavior", s.post_tc_behavior, [](PostCriticalBehavior m) { return to_string(m); },
    parse_post_critical_behavior);
  v.field("bezier_inner_first", s.bezier_inner_first);
  v.field("bezier_inner_second", s.bezier_inner_second);
  v.field("edge_reach_delay", s.edge_reach_delay);
  v.field("hold_heading_time_constant", s.hold_heading_time_constant);
}

template <typename V, typename S>
void visit_policy(V & v, S & s)
{
  v.enumeration("kind", s.kind, [](PolicyKind k) { return to_string(k); }, parse_policy_kind);
  v.field("reaction_delay", s.reaction_delay);
  v.enumeration(
    "brake_level", s.brake_level, [](BrakeLevel b) { return to_string(b); }, parse_brake_level);
  v.field("steer_delay", s.steer_delay);
  v.field("steer_rate", s.steer_rate);
  v.field("steer_target", s.steer_target);
  v.field("steer_hold", s.steer_hold);
  v.field("reversal_delay", s.reversal_delay);
  v.field("reversal_target", s.reversal_target);
  v.field("release_lead", s.release_lead);
}

template <typename V, typename S>
void visit_mapping(V & v, S & s)
{
  v.field("cruise_accel_pct", s.cruise_accel_pct);
  v.field("accel_zero_pct", s.accel_zero_pct);
  v.field("accel_gain", s.accel_gain);
  v.field("brake_ref_pct", s.brake_ref_pct);
  v.field("brake_ref_decel", s.brake_ref_decel);
  v.field("full_brake_decel", s.full_brake_decel);
  v.field("steer_gain", s.steer_gain);
  v.field("soft_brake_decel", s.soft_brake_decel);
  v.field("hard_brake_decel", s.hard_brake_decel);
  v.field("brake_onset_pct", s.brake_onset_pct);
  v.field("brake_rate", s.brake_rate);
  v.field("steer_onset_deg", s.steer_onset_deg);
  v.field("counter_steer_max_deg", s.counter_steer_max_deg);
  v.field("counter_steer_gain", s.counter_steer_gain);
  v.field("actuator_tau", s.actuator_tau);
}

template <typename V, typename S>
void visit_limits(V & v, S & s)
{
  v.field("v_max", s.v_max);
  v.field("a_fwd_max", s.a_fwd_max);
  v.field("a_brk_max", s.a_brk_max);
  v.field("a_lat_left_max", s.a_lat_left_max);
  v.field("a_lat_right_max", s.a_lat_right_max);
  v.field("j_fwd_max", s.j_fwd_max);
  v.field("j_bwd_max", s.j_bwd_max);
  v.field("j_lat_max", s.j_lat_max);
  v.field("vy_max", s.vy_max);
}

template <typename V, typename S>
void visit_simulation(V & v, S & s)
{
  v.field("dt", s.dt);
  v.field("horizon", s.horizon);
  v.field("post_proximity", s.post_proximity);
  v.object("mapping", s.mapping);
}

template <typename V, typename S>
void visit_prediction(V & v, S & s)
{
  v.object("sv_limits", s.sv_limits);
  v.object("pov_limits", s.pov_limits);
  v.field("incursion_detect_threshold", s.incursion_detect_threshold);
  v.enumeration(
    "road_pruning", s.road_pruning, [](RoadPruning r) { return to_string(r); }, parse_road_pruning);
  v.field("grid_dx", s.grid_dx);
  v.field("grid_dy", s.grid_dy);
  v.field("tau_step", s.tau_step);
  v.field("horizon", s.horizon);
  v.field("continuous_hull", s.continuous_hull);
}

template <typename V, typename S>
void visit_thresholds(V & v, S & s)
{
  v.field("accel_release_pct", s.accel_release_pct);
  v.field("brake_onset_pct", s.brake_onset_pct);
  v.field("steer_onset_deg", s.steer_onset_deg);
}

template <typename V, typename S>
void visit_analysis(V & v, S & s)
{
  v.object("thresholds", s.thresholds);
  v.field("onset_delay", s.onset_delay);
  v.field("soft_brake_accel", s.soft_brake_accel);
  v.field("hard_brake_accel", s.hard_brake_accel);
  v.enumeration(
    "accel_source", s.accel_source, [](AccelSource a) { return to_string(a); }, parse_accel_source);
  v.field("smoothing_window", s.smoothing_window);
}

template <typename V, typename S>
void visit_bootstrap(V & v, S & s)
{
  v.field("resamples", s.resamples);
  v.field("seed", s.seed);
  v.field("level", s.level);
}

template <typename V, typename S>
void visit_oracle(V & v, S & s)
{
  v.field("samples", s.samples);
  v.field("anchors", s.anchors);
  v.field("seed", s.seed);
}

template <typename V, typename S>
void dispatch(V & v, S & s)
{
  using T = std::remove_const_t<S>;
  if constexpr (std::is_same_v<T, RoadSpec>) visit_road(v, s);
  else if constexpr (std::is_same_v<T, VehicleSpec>) visit_vehicle(v, s);
  else if constexpr (std::is_same_v<T, ScenarioSpec>) visit_scenario(v, s);
  else if constexpr (std::is_same_v<T, PolicySpec>) visit_policy(v, s);
  else if constexpr (std::is_same_v<T, ControlMapping>) visit_mapping(v, s);
  else if constexpr (std::is_same_v<T, KinematicLimits>) visit_limits(v, s);
  else if constexpr (std::is_same_v<T, SimulationSettings>) visit_simulation(v, s);
  else if constexpr (std::is_same_v<T, PredictionConfig>) visit_prediction(v, s);
  else if constexpr (std::is_same_v<T, ResponseThresholds>) visit_thresholds(v, s);
  else if constexpr (std::is_same_v<T, AnalysisOptions>) visit_analysis(v, s);
  else if constexpr (std::is_same_v<T, BootstrapOptions>) visit_bootstrap(v, s);
  else if constexpr (std::is_same_v<T, OracleOptions>) visit_oracle(v, s);
  else static_assert(sizeof(T) == 0, "no visitor for type");
}

template <typename T>
void JsonWriter::object(const char * key, const T & v)
{
  JsonWriter inner;
  dispatch(inner, v);
  value[key] = std::move(inner.value);
}

template <typename T>
void JsonReader::object(const char * key, T & out)
{
  seen_.insert(key);
  const auto it = j_.find(key);
  if (it == j_.end()) return;
  JsonReader inner(*it, where(key));
  dispatch(inner, out);
  inner.finish();
}

template <typename T>
json to_json_value(const T & v)
{
  JsonWriter w;
  dispatch(w, v);
  return std::move(w.value);
}

template <typename T>
void from_json_value(const json & j, T & out, const std::string & context)
{
  JsonReader r(j, context);
  dispatch(r, out);
  r.finish();
}

json config_json(const RunConfig & c)
{
  json j = json::object();
  j["scenario"] = to_json_value(c.scenario);
  j["simulation"] = to_json_value(c.simulation);
  j["sv_policy"] = to_json_value(c.sv_policy);
  json cohort = json::array();
  for (const auto & e : c.cohort) {
    cohort.push_back({{"policy", to_json_value(e.policy)}, {"count", e.count}});
  }
  j["cohort"] = std::move(cohort);
  j["reaction_jitter"] = c.reaction_jitter;
  j["prediction"] = to_json_value(c.prediction);
  j["analysis"] = to_json_value(c.analysis);
  j["eval_step"] = c.eval_step;
  j["bootstrap"] = to_json_value(c.bootstrap);
  j["oracle"] = to_json_value(c.oracle);
  j["oracle_incursion_levels"] = c.oracle_incursion_levels;
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  return j;
}

}  // namespace

void RunConfig::validate() const
{
  scenario.validate();
  sv_policy.validate();
  simulation.mapping.validate();
  require(simulation.dt > 0.0, "simulation.dt must be positive");
  require(simulation.horizon >= 0.0, "simulation.horizon must be >= 0");
  require(simulation.post_proximity >= 0.0, "simulation.post_proximity must be >= 0");
  for (const auto & e : cohort) {
    e.policy.validate();
    require(e.count >= 0, "cohort counts must be >= 0");
  }
  require(reaction_jitter >= 0.0, "reaction_jitter must be >= 0");
  prediction.validate();
  require(eval_step > 0.0, "eval_step must be positive");
  require(bootstrap.resamples >= 1, "bootstrap.resamples must be >= 1");
  require(bootstrap.level > 0.0 && bootstrap.level < 1.0, "bootstrap.level must be in (0, 1)");
  require(oracle.samples >= 1 && oracle.anchors >= 1, "oracle samples and anchors must be >= 1");
  for (double il : oracle_incursion_levels) {
    require(il >= -1.0 && il <= 1.0, "oracle incursion levels must be in [-1, 1]");
  }
}

int RunConfig::cohort_size() const
{
  int n = 0;
  for (const auto & e : cohort) n += e.count;
  return n;
}

RunConfig default_run_config()
{
  RunConfig c;
  const std::pair<PolicyKind, int> mix[] = {
    {PolicyKind::no_response, 4},          {PolicyKind::brake_only, 4},
    {PolicyKind::brake_then_steer_center, 3}, {PolicyKind::steer_center_only, 3},
    {PolicyKind::steer_shoulder_only, 3},  {PolicyKind::shoulder_then_reversal, 3}};
  for (const auto & [kind, count] : mix) {
    PolicySpec p;
    p.kind = kind;
    c.cohort.push_back({p, count});
  }
  return c;
}

std::string config_to_json(const RunConfig & config)
{
  return config_json(config).dump(2) + "\n";
}

RunConfig config_from_json(const std::string & text)
{
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error & e) {
    fail(ErrorCode::parse, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::parse, "config: expected an object");
  RunConfig c;
  const std::set<std::string> known = {
    "scenario", "simulation", "sv_policy", "cohort", "reaction_jitter", "prediction", "analysis",
    "eval_step", "bootstrap", "oracle", "oracle_incursion_levels", "output_dir", "seed"};
  for (const auto & item : j.items()) {
    if (!known.count(item.key())) fail(ErrorCode::parse, "config." + item.key() + ": unknown key");
  }
  if (j.contains("scenario")) from_json_value(j["scenario"], c.scenario, "config.scenario");
  if (j.contains("simulation")) from_json_value(j["simulation"], c.simulation, "config.simulation");
  if (j.contains("sv_policy")) from_json_value(j["sv_policy"], c.sv_policy, "config.sv_policy");
  if (j.contains("cohort")) {
    const auto & arr = j["cohort"];
    if (!arr.is_array()) fail(ErrorCode::parse, "config.cohort: expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ctx = "config.cohort[" + std::to_string(i) + "]";
      const auto & e = arr[i];
      if (!e.is_object()) fail(ErrorCode::parse, ctx + ": expected an object");
      CohortEntry entry;
      for (const auto & item : e.items()) {
        if (item.key() != "policy" && item.key() != "count") {
          fail(ErrorCode::parse, ctx + "." + item.key() + ": unknown key");
        }
      }
      if (e.contains("policy")) from_json_value(e["policy"], entry.policy, ctx + ".policy");
      if (e.contains("count")) {
        if (!e["count"].is_number_integer()) fail(ErrorCode::parse, ctx + ".count: expected an integer");
        entry.count = e["count"].get<int>();
      }
      c.cohort.push_back(entry);
    }
  }
  JsonReader top(j, "config");
  top.field("reaction_jitter", c.reaction_jitter);
  top.field("eval_step", c.eval_step);
  top.field("oracle_incursion_levels", c.oracle_incursion_levels);
  top.field("output_dir", c.output_dir);
  top.field("seed", c.seed);
  if (j.contains("prediction")) from_json_value(j["prediction"], c.prediction, "config.prediction");
  if (j.contains("analysis")) from_json_value(j["analysis"], c.analysis, "config.analysis");
  if (j.contains("bootstrap")) from_json_value(j["bootstrap"], c.bootstrap, "config.bootstrap");
  if (j.contains("oracle")) from_json_value(j["oracle"], c.oracle, "config.oracle");
  try {
    c.validate();
  } catch (const Error & e) {
    fail(ErrorCode::parse, std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::string & path)
{
  return config_from_json(read_text_file(path));
}

void save_config(const RunConfig & config, const std::string & path)
{
  write_text_file(path, config_to_json(config));
}

namespace
{

double round_time(double t)
{
  return std::round(t * 1e9) / 1e9;
}

}  // namespace

std::string format_number(double value)
{
  if (value == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  if (res.ec != std::errc{}) fail(ErrorCode::internal, "number formatting failed");
  return std::string(buf, res.ptr);
}

std::string format_optional(const std::optional<double> & value)
{
  return value ? format_number(*value) : std::string{};
}

namespace
{

const std::vector<std::string> kLogColumns = {
  "t",      "sv_x",      "sv_y",      "sv_vx",     "sv_vy",  "sv_ax",  "sv_ay",
  "pov_x",  "pov_y",     "pov_vx",    "pov_vy",    "accel_pct", "brake_pct", "steer_deg"};
const std::vector<std::string> kLogUnits = {
  "s", "m", "m", "m/s", "m/s", "m/s^2", "m/s^2", "m", "m", "m/s", "m/s", "%", "%", "deg"};

std::vector<std::string> split_csv(const std::string & line)
{
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_double(const std::string & text, double & out)
{
  if (text.empty()) return false;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc{} && res.ptr == text.data() + text.size() && std::isfinite(out);
}

}  // namespace

std::string sidecar_path(const std::string & log_path)
{
  return log_path + ".meta.json";
}

void write_trajectory_log(const TrajectoryLog & log, std::ostream & table, std::ostream & sidecar)
{
  Table t(kLogColumns, kLogUnits);
  for (const auto & s : log.samples) {
    t.add_row(
      {format_number(s.t), format_number(s.sv.x), format_number(s.sv.y), format_number(s.sv.vx),
       format_number(s.sv.vy), format_number(s.sv.ax), format_number(s.sv.ay),
       format_number(s.pov.x), format_number(s.pov.y), format_number(s.pov.vx),
       format_number(s.pov.vy), format_number(s.controls.accel_pct),
       format_number(s.controls.brake_pct), format_number(s.controls.steer_deg)});
  }
  t.write(table);
  json meta = {
    {"format", "odli-trajectory-log"},
    {"version", 1},
    {"dt", log.dt},
    {"t_T", log.t_T},
    {"label", log.label},
    {"incomplete", log.incomplete},
    {"scenario", to_json_value(log.scenario)}};
  sidecar << meta.dump(2) << "\n";
}

void save_trajectory_log(const TrajectoryLog & log, const std::string & path)
{
  std::ostringstream table, meta;
  write_trajectory_log(log, table, meta);
  write_text_file(path, table.str());
  write_text_file(sidecar_path(path), meta.str());
}

TrajectoryLog read_trajectory_log(std::istream & in, const std::string * sidecar_json)
{
  TrajectoryLog log;
  bool have_dt = false;
  if (sidecar_json != nullptr) {
    json meta;
    try {
      meta = json::parse(*sidecar_json);
    } catch (const json::parse_error & e) {
      fail(ErrorCode::parse, std::string("log sidecar is not valid JSON: ") + e.what());
    }
    if (!meta.is_object()) fail(ErrorCode::parse, "log sidecar: expected an object");
    auto number = [&](const char * key, double & out) {
      if (!meta.contains(key)) return false;
      if (!meta[key].is_number()) fail(ErrorCode::parse, std::string("log sidecar.") + key + ": expected a number");
      out = meta[key].get<double>();
      return true;
    };
    have_dt = number("dt", log.dt);
    number("t_T", log.t_T);
    if (meta.contains("scenario")) from_json_value(meta["scenario"], log.scenario, "log sidecar.scenario");
    if (!meta.contains("t_T")) log.t_T = make_timing(log.scenario).t_T;
    if (meta.contains("label") && meta["label"].is_string()) log.label = meta["label"].get<std::string>();
    if (meta.contains("incomplete") && meta["incomplete"].is_boolean()) {
      log.incomplete = meta["incomplete"].get<bool>();
    }
  } else {
    log.t_T = make_timing(log.scenario).t_T;
  }

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) fail(ErrorCode::parse, "log table is empty");
  ++line_no;
  const auto header = split_csv(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const auto & name : kLogColumns) {
    if (name == "sv_ax" || name == "sv_ay") continue;
    if (!col.count(name)) fail(ErrorCode::parse, "log table is missing column '" + name + "'");
  }
  log.has_sv_accel = col.count("sv_ax") && col.count("sv_ay");

  auto get = [&](const std::vector<std::string> & cells, const std::string & name) {
    const auto idx = col.at(name);
    double v = 0.0;
    if (idx >= cells.size() || !parse_double(cells[idx], v)) {
      fail(
        ErrorCode::parse, "row " + std::to_string(line_no) + ": column '" + name +
                            "' is not a finite number");
    }
    return v;
  };
  bool first_data = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    double probe = 0.0;
    if (first_data && line_no == 2 && !parse_double(cells.empty() ? "" : cells[0], probe)) {
      continue;  // units row
    }
    first_data = false;
    if (cells.size() != header.size()) {
      fail(
        ErrorCode::parse, "row " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " cells, found " +
                            std::to_string(cells.size()));
    }
    LogSample s;
    s.t = get(cells, "t");
    s.sv.t = s.pov.t = s.t;
    s.sv.heading_sign = +1;
    s.pov.heading_sign = -1;
    s.sv.x = get(cells, "sv_x");
    s.sv.y = get(cells, "sv_y");
    s.sv.vx = get(cells, "sv_vx");
    s.sv.vy = get(cells, "sv_vy");
    if (log.has_sv_accel) {
      s.sv.ax = get(cells, "sv_ax");
      s.sv.ay = get(cells, "sv_ay");
    }
    s.pov.x = get(cells, "pov_x");
    s.pov.y = get(cells, "pov_y");
    s.pov.vx = get(cells, "pov_vx");
    s.pov.vy = get(cells, "pov_vy");
    s.controls.accel_pct = get(cells, "accel_pct");
    s.controls.brake_pct = get(cells, "brake_pct");
    s.controls.steer_deg = get(cells, "steer_deg");
    if (!log.samples.empty()) {
      const double step = s.t - log.samples.back().t;
      if (!(step > 0.0)) {
        fail(ErrorCode::parse, "row " + std::to_string(line_no) + ": timestamps are not increasing");
      }
      if (!have_dt && log.samples.size() == 1) {
        log.dt = step;
        have_dt = true;
      }
      if (std::abs(step - log.dt) > 1e-6 * log.dt) {
        fail(
          ErrorCode::parse, "row " + std::to_string(line_no) + ": sample spacing " +
                              format_number(step) + " differs from dt " + format_number(log.dt));
      }
    }
    log.samples.push_back(s);
  }
  if (log.samples.size() < 2) fail(ErrorCode::parse, "log needs at least two samples");
  log.validate();
  return log;
}

TrajectoryLog load_trajectory_log(const std::string & path)
{
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open log '" + path + "'");
  const auto meta_path = sidecar_path(path);
  TrajectoryLog log;
  if (std::filesystem::exists(meta_path)) {
    const auto meta = read_text_file(meta_path);
    log = read_trajectory_log(in, &meta);
  } else {
    log = read_trajectory_log(in, nullptr);
  }
  if (log.label.empty()) log.label = std::filesystem::path(path).stem().string();
  return log;
}

Table::Table(std::vector<std::string> columns, std::vector<std::string> units)
: columns_(std::move(columns)), units_(std::move(units))
{
  require(columns_.size() == units_.size(), "table needs one unit per column");
}

void Table::add_row(std::vector<std::string> cells)
{
  require(cells.size() == columns_.size(), "table row has the wrong number of cells");
  rows_.push_back(std::move(cells));
}

void Table::write(std::ostream & out) const
{
  auto line = [&](const std::vector<std::string> & cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  line(columns_);
  line(units_);
  for (const auto & r : rows_) line(r);
}

void Table::save(const std::string & path) const
{
  std::ostringstream out;
  write(out);
  write_text_file(path, out.str());
}

Table reach_snapshot_table(const DrivableArea & area)
{
  Table t(
    {"vehicle", "layer", "tau", "ix", "iy", "x_lo", "x_hi", "y_lo", "y_hi", "vx_lo", "vx_hi",
     "vy_lo", "vy_hi", "ax_lo", "ax_hi", "ay_lo", "ay_hi"},
    {"-", "-", "s", "-", "-", "m", "m", "m", "m", "m/s", "m/s", "m/s", "m/s", "m/s^2", "m/s^2",
     "m/s^2", "m/s^2"});
  auto emit = [&](const char * vehicle, const std::vector<ReachLayer> & layers) {
    for (std::size_t k = 0; k < layers.size(); ++k) {
      for (const auto & c : layers[k].cells) {
        t.add_row(
          {vehicle, std::to_string(k), format_number(layers[k].tau), std::to_string(c.ix),
           std::to_string(c.iy), format_number(c.lon.p_lo), format_number(c.lon.p_hi),
           format_number(c.lat.p_lo), format_number(c.lat.p_hi), format_number(c.lon.v_lo),
           format_number(c.lon.v_hi), format_number(c.lat.v_lo), format_number(c.lat.v_hi),
           format_number(c.lon.a_lo), format_number(c.lon.a_hi), format_number(c.lat.a_lo),
           format_number(c.lat.a_hi)});
      }
    }
  };
  emit("pov", area.pov_layers);
  emit("sv", area.layers);
  return t;
}

namespace
{

// Blue-to-yellow ramp for SV layers, dark-red-to-orange for POV layers.
std::string layer_color(double frac, bool pov)
{
  frac = std::clamp(frac, 0.0, 1.0);
  int r, g, b;
  if (pov) {
    r = static_cast<int>(150 + 105 * frac);
    g = static_cast<int>(40 + 150 * frac);
    b = static_cast<int>(40 + 40 * frac);
  } else {
    r = static_cast<int>(40 + 210 * frac);
    g = static_cast<int>(60 + 170 * frac);
    b = static_cast<int>(160 - 120 * frac);
  }
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string reach_snapshot_svg(
  const DrivableArea & area, const WorldState & world, const ScenarioSpec & scenario)
{
  const auto & grid = area.grid;
  const double W = scenario.road.lane_width;
  double x_lo = std::min(world.sv.x, world.pov.x) - 10.0;
  double x_hi = std::max(world.sv.x, world.pov.x) + 10.0;
  auto widen = [&](const std::vector<ReachLayer> & layers) {
    for (const auto & layer : layers) {
      if (layer.empty()) continue;
      const auto h = layer.x_hull(grid);
      x_lo = std::min(x_lo, h.lo);
      x_hi = std::max(x_hi, h.hi);
    }
  };
  widen(area.layers);
  widen(area.pov_layers);
  const double y_lo = -W - 4.0, y_hi = W + 4.0;
  const double width_px = 1200.0;
  const double sx = width_px / (x_hi - x_lo);
  const double sy = 12.0;
  const double height_px = (y_hi - y_lo) * sy;
  auto px = [&](double x) { return (x - x_lo) * sx; };
  auto py = [&](double y) { return (y_hi - y) * sy; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_number(width_px)
      << "\" height=\"" << format_number(height_px) << "\" viewBox=\"0 0 "
      << format_number(width_px) << ' ' << format_number(height_px) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg << "<rect x=\"0\" y=\"" << format_number(py(W)) << "\" width=\"" << format_number(width_px)
      << "\" height=\"" << format_number(2 * W * sy) << "\" fill=\"#e8e8e8\"/>\n";
  svg << "<line x1=\"0\" x2=\"" << format_number(width_px) << "\" y1=\"" << format_number(py(0))
      << "\" y2=\"" << format_number(py(0)) << "\" stroke=\"#999\" stroke-dasharray=\"6 4\"/>\n";
  auto draw_layers = [&](const std::vector<ReachLayer> & layers, bool pov, std::size_t total) {
    for (std::size_t k = layers.size(); k-- > 0;) {
      const auto color = layer_color(total > 1 ? static_cast<double>(k) / (total - 1) : 0.0, pov);
      for (const auto & c : layers[k].cells) {
        const auto xe = grid.x_extent(c.ix);
        const auto ye = grid.y_extent(c.iy);
        svg << "<rect x=\"" << format_number(px(xe.lo)) << "\" y=\"" << format_number(py(ye.hi))
            << "\" width=\"" << format_number(grid.dx * sx) << "\" height=\""
            << format_number(grid.dy * sy) << "\" fill=\"" << color << "\" fill-opacity=\"0.55\"/>\n";
      }
    }
  };
  draw_layers(area.pov_layers, true, area.layers.size());
  draw_layers(area.layers, false, area.layers.size());
  auto vehicle = [&](const VehicleState & s, const VehicleSpec & spec, const char * color) {
    const auto r = footprint(s, spec);
    svg << "<rect x=\"" << format_number(px(r.x_lo)) << "\" y=\"" << format_number(py(r.y_hi))
        << "\" width=\"" << format_number((r.x_hi - r.x_lo) * sx) << "\" height=\""
        << format_number((r.y_hi - r.y_lo) * sy) << "\" fill=\"" << color << "\"/>\n";
  };
  vehicle(world.sv, scenario.sv_spec, "#0b2a6f");
  vehicle(world.pov, scenario.pov_spec, "#6f0b0b");
  svg << "<text x=\"8\" y=\"16\" font-family=\"sans-serif\" font-size=\"13\">t = "
      << format_number(area.t) << " s, drivable area " << (area.exists ? "exists" : "empty")
      << ", POV prediction " << to_string(area.mode) << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

Table prevalence_table(const std::vector<PrevalencePoint> & points)
{
  Table t({"t_rel", "fraction", "ci_lo", "ci_hi", "n_carried"}, {"s", "-", "-", "-", "runs"});
  for (const auto & p : points) {
    t.add_row(
      {format_number(round_time(p.t_rel)), format_number(p.fraction), format_number(p.ci_lo),
       format_number(p.ci_hi), std::to_string(p.n_carried)});
  }
  return t;
}

Table sequence_graph_table(const SequenceGraph & graph)
{
  Table t(
    {"record", "from", "to", "count", "initial", "inflow", "outflow"},
    {"-", "-", "-", "samples|runs", "runs", "runs", "runs"});
  for (int n = 0; n < kNodeCount; ++n) {
    t.add_row(
      {"node", node_name(n), "", std::to_string(graph.occupancy(n)), std::to_string(graph.initial(n)),
       std::to_string(graph.inflow(n)), std::to_string(graph.outflow(n))});
  }
  for (const auto & [key, count] : graph.edges()) {
    t.add_row({"edge", node_name(key.first), node_name(key.second), std::to_string(count), "", "", ""});
  }
  return t;
}

Table timeline_table(const DrivableTimeline & timeline)
{
  Table t({"t", "t_rel", "exists", "pov_mode"}, {"s", "s", "bool", "-"});
  for (const auto & p : timeline.points) {
    t.add_row(
      {format_number(round_time(p.t)), format_number(round_time(p.t - timeline.t_T)), p.exists ? "1" : "0", to_string(p.mode)});
  }
  return t;
}

Table oracle_table(const OracleReport & report)
{
  Table t(
    {"incursion_level", "vehicle", "t", "samples", "contained", "fraction", "tightness_lon",
     "tightness_lat", "first_violation"},
    {"-", "-", "s", "states", "states", "-", "-", "-", "-"});
  for (const auto & c : report.cases) {
    t.add_row(
      {format_number(c.incursion_level), c.vehicle, format_number(c.t), std::to_string(c.report.total),
       std::to_string(c.report.contained), format_number(c.report.fraction),
       format_number(c.tight.lon), format_number(c.tight.lat),
       c.report.has_violation ? c.report.violation_reason : ""});
  }
  return t;
}

void write_text_file(const std::string & path, const std::string & content)
{
  const std::filesystem::path p(path);
  if (p.has_parent_path()) ensure_directory(p.parent_path().string());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write '" + path + "'");
  out << content;
  if (!out) fail(ErrorCode::io, "failed writing '" + path + "'");
}

std::string read_text_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ensure_directory(const std::string & path)
{
  if (path.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) fail(ErrorCode::io, "cannot create directory '" + path + "': " + ec.message());
}

}  // namespace odli
