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

#include "odli/odli.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace
{

struct CliFailure
{
  odli_status status;
  std::string message;
};

void check(odli_status status)
{
  if (status != ODLI_OK) throw CliFailure{status, odli_last_error_message()};
}

class Owned
{
public:
  Owned() = default;
  ~Owned() { odli_string_free(text_); }
  Owned(const Owned &) = delete;
  Owned & operator=(const Owned &) = delete;
  char ** out() { return &text_; }
  std::string str() const { return text_ ? std::string(text_) : std::string(); }

private:
  char * text_{nullptr};
};

template <typename T, void (*Destroy)(T *)>
class Handle
{
public:
  Handle() = default;
  ~Handle() { Destroy(ptr_); }
  Handle(const Handle &) = delete;
  Handle & operator=(const Handle &) = delete;
  T ** out() { return &ptr_; }
  T * get() const { return ptr_; }

private:
  T * ptr_{nullptr};
};

using Config = Handle<odli_config_t, odli_config_destroy>;
using Log = Handle<odli_log_t, odli_log_destroy>;
using Cohort = Handle<odli_cohort_t, odli_cohort_destroy>;

struct Options
{
  std::string config_path;
  std::optional<double> il, dt, grid_dx, horizon;
  std::optional<std::string> policy, road_pruning;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string svg;
  std::vector<std::string> logs;
  double t{0.0};
  bool cohort{false};
};

void add_common(CLI::App * cmd, Options & o)
{
  cmd->add_option("--config", o.config_path, "RunConfig JSON file (defaults when omitted)");
  cmd->add_option("--il", o.il, "Incursion level in [-1, 1]");
  cmd->add_option("--policy", o.policy, "SV policy kind for single-run commands");
  cmd->add_option("--dt", o.dt, "Simulation step in seconds");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--grid-dx", o.grid_dx, "Longitudinal grid cell size in metres");
  cmd->add_option("--horizon", o.horizon, "Prediction horizon in seconds");
  cmd->add_option("--road-pruning", o.road_pruning, "corridor or off");
  cmd->add_option("--out", o.out, "Output path (stdout when omitted)");
}

void load_config(const Options & o, Config & config)
{
  if (o.config_path.empty()) {
    check(odli_config_create_default(config.out()));
  } else {
    check(odli_config_load(o.config_path.c_str(), config.out()));
  }
  auto * c = config.get();
  if (o.il) check(odli_config_set_number(c, "scenario.incursion_level", *o.il));
  if (o.dt) check(odli_config_set_number(c, "simulation.dt", *o.dt));
  if (o.seed) check(odli_config_set_number(c, "seed", static_cast<double>(*o.seed)));
  if (o.grid_dx) check(odli_config_set_number(c, "prediction.grid_dx", *o.grid_dx));
  if (o.horizon) check(odli_config_set_number(c, "prediction.horizon", *o.horizon));
  if (o.policy) check(odli_config_set_string(c, "sv_policy.kind", o.policy->c_str()));
  if (o.road_pruning) check(odli_config_set_string(c, "prediction.road_pruning", o.road_pruning->c_str()));
}

void emit(const std::string & path, const std::string & text)
{
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliFailure{ODLI_ERR_IO, "cannot write '" + path + "'"};
  out << text;
  if (!out) throw CliFailure{ODLI_ERR_IO, "failed writing '" + path + "'"};
}

// Cohort from explicit --log files, or simulated from the config cohort when none are given.
void gather_cohort(const Options & o, const Config & config, Cohort & cohort)
{
  if (o.logs.empty()) {
    check(odli_cohort_simulate(config.get(), cohort.out()));
    return;
  }
  check(odli_cohort_create(cohort.out()));
  for (const auto & path : o.logs) {
    Log log;
    check(odli_log_load(path.c_str(), log.out()));
    check(odli_cohort_add_log(cohort.get(), log.get()));
  }
}

void single_log(const Options & o, const Config & config, Log & log)
{
  if (o.logs.size() > 1) throw CliFailure{ODLI_ERR_INVALID_ARGUMENT, "expected at most one --log"};
  if (o.logs.empty()) {
    check(odli_simulate(config.get(), log.out()));
  } else {
    check(odli_log_load(o.logs.front().c_str(), log.out()));
  }
}

int report_failure(const CliFailure & f)
{
  nlohmann::json err = {
    {"error", {{"status", odli_status_name(f.status)}, {"code", static_cast<int>(f.status)}, {"message", f.message}}}};
  std::cerr << err.dump() << "\n";
  return static_cast<int>(f.status) == 0 ? 1 : static_cast<int>(f.status);
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Drivable-area and response analysis for opposite-direction lateral incursions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(odli_version()));

  Options o;
  auto * scenario = app.add_subcommand("scenario", "Scenario configuration");
  scenario->require_subcommand(1);
  auto * gen = scenario->add_subcommand("gen", "Write a RunConfig with overrides applied");
  add_common(gen, o);

  auto * simulate = app.add_subcommand("simulate", "Roll out the SV policy, or the whole cohort");
  add_common(simulate, o);
  simulate->add_flag("--cohort", o.cohort, "Simulate every cohort run into the --out directory");

  auto * analyze = app.add_subcommand("analyze", "Response metrics");
  analyze->require_subcommand(1);
  auto * responses = analyze->add_subcommand("responses", "Per-run response times and outcomes");
  auto * sequence = analyze->add_subcommand("sequence", "Control-state sequence graph");

  auto * reach = app.add_subcommand("reach", "Reachability and drivable area");
  reach->require_subcommand(1);
  auto * compute = reach->add_subcommand("compute", "Drivable-area snapshot at one time");
  auto * timeline = reach->add_subcommand("timeline", "Drivable-area existence over the analysis window");
  auto * aggregate = reach->add_subcommand("aggregate", "Cohort prevalence with bootstrap intervals");

  auto * oracle = app.add_subcommand("oracle", "Sampling checks");
  oracle->require_subcommand(1);
  auto * verify = oracle->add_subcommand("verify", "Containment of sampled trajectories in reachable sets");

  for (auto * cmd : {responses, sequence, compute, timeline, aggregate, verify}) add_common(cmd, o);
  for (auto * cmd : {responses, sequence, aggregate}) {
    cmd->add_option("--log", o.logs, "Trajectory log files (cohort simulated when omitted)");
  }
  for (auto * cmd : {compute, timeline}) {
    cmd->add_option("--log", o.logs, "Trajectory log file (SV policy simulated when omitted)");
  }
  compute->add_option("--t", o.t, "Evaluation time in seconds")->required();
  compute->add_option("--svg", o.svg, "Also render the snapshot as SVG");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    return report_failure({ODLI_ERR_INVALID_ARGUMENT, e.what()});
  }

  try {
    Config config;
    load_config(o, config);

    if (gen->parsed()) {
      Owned json;
      check(odli_config_to_json(config.get(), json.out()));
      emit(o.out, json.str());
    } else if (simulate->parsed()) {
      if (o.cohort) {
        Cohort cohort;
        check(odli_cohort_simulate(config.get(), cohort.out()));
        check(odli_cohort_save(cohort.get(), o.out.empty() ? "." : o.out.c_str()));
      } else {
        Log log;
        check(odli_simulate(config.get(), log.out()));
        if (o.out.empty()) throw CliFailure{ODLI_ERR_INVALID_ARGUMENT, "simulate needs --out"};
        check(odli_log_save(log.get(), o.out.c_str()));
      }
    } else if (responses->parsed() || sequence->parsed()) {
      Cohort cohort;
      gather_cohort(o, config, cohort);
      Owned csv;
      if (responses->parsed()) {
        check(odli_analyze_responses(config.get(), cohort.get(), csv.out()));
      } else {
        check(odli_analyze_sequence(config.get(), cohort.get(), csv.out()));
      }
      emit(o.out, csv.str());
    } else if (compute->parsed()) {
      Log log;
      single_log(o, config, log);
      Owned csv, svg;
      int exists = 0;
      check(odli_reach_compute(config.get(), log.get(), o.t, csv.out(), o.svg.empty() ? nullptr : svg.out(), &exists));
      emit(o.out, csv.str());
      if (!o.svg.empty()) emit(o.svg, svg.str());
    } else if (timeline->parsed()) {
      Log log;
      single_log(o, config, log);
      Owned csv;
      check(odli_reach_timeline(config.get(), log.get(), csv.out()));
      emit(o.out, csv.str());
    } else if (aggregate->parsed()) {
      Cohort cohort;
      gather_cohort(o, config, cohort);
      Owned csv;
      check(odli_reach_aggregate(config.get(), cohort.get(), csv.out()));
      emit(o.out, csv.str());
    } else if (verify->parsed()) {
      if (o.il) {
        const std::string levels = "[" + nlohmann::json(*o.il).dump() + "]";
        check(odli_config_set_json(config.get(), "oracle_incursion_levels", levels.c_str()));
      }
      Owned csv;
      int sound = 0;
      check(odli_oracle_verify(config.get(), csv.out(), &sound));
      emit(o.out, csv.str());
      if (!sound) throw CliFailure{ODLI_ERR_INTERNAL, "sampled trajectories escaped the reachable set"};
    }
  } catch (const CliFailure & f) {
    return report_failure(f);
  } catch (const std::exception & e) {
    return report_failure({ODLI_ERR_IO, e.what()});
  }
  return 0;
}
