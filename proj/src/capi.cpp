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

#include "odli/error.hpp"
#include "odli/pipeline.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <new>
#include <sstream>
#include <string>

struct odli_config
{
  odli::RunConfig value;
};

struct odli_log
{
  odli::TrajectoryLog value;
};

struct odli_cohort
{
  std::vector<odli::TrajectoryLog> logs;
};

namespace
{

thread_local std::string g_last_error;

template <typename F>
odli_status guarded(F && body)
{
  try {
    body();
    g_last_error.clear();
    return ODLI_OK;
  } catch (const odli::Error & e) {
    g_last_error = e.what();
    return static_cast<odli_status>(e.code());
  } catch (const nlohmann::json::exception & e) {
    g_last_error = e.what();
    return ODLI_ERR_PARSE;
  } catch (const std::bad_alloc &) {
    g_last_error = "out of memory";
    return ODLI_ERR_INTERNAL;
  } catch (const std::exception & e) {
    g_last_error = e.what();
    return ODLI_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return ODLI_ERR_INTERNAL;
  }
}

void need(const void * p, const char * what)
{
  if (p == nullptr) odli::fail(odli::ErrorCode::invalid_argument, std::string(what) + " must not be null");
}

char * dup_string(const std::string & s)
{
  auto * out = static_cast<char *>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string table_text(const odli::Table & t)
{
  std::ostringstream out;
  t.write(out);
  return out.str();
}

nlohmann::json * walk(nlohmann::json & root, const std::string & path)
{
  nlohmann::json * node = &root;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const auto key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty() || !node->is_object() || !node->contains(key)) {
      odli::fail(odli::ErrorCode::invalid_argument, "unknown config path '" + path + "'");
    }
    node = &(*node)[key];
    if (dot == std::string::npos) return node;
    start = dot + 1;
  }
}

void set_path(odli_config * config, const std::string & path, nlohmann::json value, bool scalar = true)
{
  auto root = nlohmann::json::parse(odli::config_to_json(config->value));
  auto * node = walk(root, path);
  if (scalar && (node->is_object() || node->is_array())) {
    odli::fail(odli::ErrorCode::invalid_argument, "config path '" + path + "' is not a scalar");
  }
  if (node->is_number_unsigned() && value.is_number_float()) {
    const double d = value.get<double>();
    if (d < 0.0 || d != static_cast<double>(static_cast<std::uint64_t>(d))) {
      odli::fail(odli::ErrorCode::invalid_argument, "config path '" + path + "' needs a non-negative integer");
    }
    value = static_cast<std::uint64_t>(d);
  } else if (node->is_number_integer() && value.is_number_float()) {
    const double d = value.get<double>();
    if (d != static_cast<double>(static_cast<long long>(d))) {
      odli::fail(odli::ErrorCode::invalid_argument, "config path '" + path + "' needs an integer");
    }
    value = static_cast<long long>(d);
  } else if (node->is_boolean() && value.is_number()) {
    value = value.get<double>() != 0.0;
  }
  *node = std::move(value);
  try {
    config->value = odli::config_from_json(root.dump());
  } catch (const odli::Error & e) {
    odli::fail(odli::ErrorCode::invalid_argument, e.what());
  }
}

}  // namespace

extern "C" {

const char * odli_last_error_message(void)
{
  return g_last_error.c_str();
}

const char * odli_status_name(odli_status status)
{
  switch (status) {
    case ODLI_OK: return "ok";
    case ODLI_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case ODLI_ERR_PARSE: return "parse_error";
    case ODLI_ERR_IO: return "io_error";
    case ODLI_ERR_INCOMPLETE_LOG: return "incomplete_log";
    case ODLI_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char * odli_version(void)
{
  return "0.1.0";
}

void odli_string_free(char * text)
{
  std::free(text);
}

odli_status odli_config_create_default(odli_config_t ** out)
{
  return guarded([&] {
    need(out, "out");
    *out = new odli_config{odli::default_run_config()};
  });
}

odli_status odli_config_load(const char * path, odli_config_t ** out)
{
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new odli_config{odli::load_config(path)};
  });
}

odli_status odli_config_from_json(const char * json, odli_config_t ** out)
{
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = new odli_config{odli::config_from_json(json)};
  });
}

odli_status odli_config_to_json(const odli_config_t * config, char ** out_json)
{
  return guarded([&] {
    need(config, "config");
    need(out_json, "out_json");
    *out_json = dup_string(odli::config_to_json(config->value));
  });
}

odli_status odli_config_save(const odli_config_t * config, const char * path)
{
  return guarded([&] {
    need(config, "config");
    need(path, "path");
    odli::save_config(config->value, path);
  });
}

odli_status odli_config_set_number(odli_config_t * config, const char * path, double value)
{
  return guarded([&] {
    need(config, "config");
    need(path, "path");
    set_path(config, path, value);
  });
}

odli_status odli_config_set_string(odli_config_t * config, const char * path, const char * value)
{
  return guarded([&] {
    need(config, "config");
    need(path, "path");
    need(value, "value");
    set_path(config, path, std::string(value));
  });
}

odli_status odli_config_set_json(odli_config_t * config, const char * path, const char * json)
{
  return guarded([&] {
    need(config, "config");
    need(path, "path");
    need(json, "json");
    set_path(config, path, nlohmann::json::parse(json), false);
  });
}

odli_status odli_config_get_number(const odli_config_t * config, const char * path, double * out)
{
  return guarded([&] {
    need(config, "config");
    need(path, "path");
    need(out, "out");
    auto root = nlohmann::json::parse(odli::config_to_json(config->value));
    const auto * node = walk(root, path);
    if (node->is_boolean()) {
      *out = node->get<bool>() ? 1.0 : 0.0;
    } else if (node->is_number()) {
      *out = node->get<double>();
    } else {
      odli::fail(odli::ErrorCode::invalid_argument, "config path '" + std::string(path) + "' is not numeric");
    }
  });
}

void odli_config_destroy(odli_config_t * config)
{
  delete config;
}

odli_status odli_simulate(const odli_config_t * config, odli_log_t ** out)
{
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    config->value.validate();
    auto log = odli::simulate_single(
      config->value, config->value.sv_policy, "run-" + odli::to_string(config->value.sv_policy.kind));
    *out = new odli_log{std::move(log)};
  });
}

odli_status odli_log_load(const char * path, odli_log_t ** out)
{
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new odli_log{odli::load_trajectory_log(path)};
  });
}

odli_status odli_log_save(const odli_log_t * log, const char * path)
{
  return guarded([&] {
    need(log, "log");
    need(path, "path");
    odli::save_trajectory_log(log->value, path);
  });
}

odli_status odli_log_summary_get(const odli_log_t * log, odli_log_summary * out)
{
  return guarded([&] {
    need(log, "log");
    need(out, "out");
    const auto & l = log->value;
    out->samples = l.samples.size();
    out->dt = l.dt;
    out->t_start = l.samples.empty() ? 0.0 : l.samples.front().t;
    out->t_end = l.samples.empty() ? 0.0 : l.samples.back().t;
    out->t_trigger = l.t_T;
    out->incursion_level = l.scenario.incursion_level;
    out->incomplete = l.incomplete ? 1 : 0;
  });
}

void odli_log_destroy(odli_log_t * log)
{
  delete log;
}

odli_status odli_cohort_simulate(const odli_config_t * config, odli_cohort_t ** out)
{
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    *out = new odli_cohort{odli::simulate_cohort(config->value)};
  });
}

odli_status odli_cohort_create(odli_cohort_t ** out)
{
  return guarded([&] {
    need(out, "out");
    *out = new odli_cohort{};
  });
}

odli_status odli_cohort_add_log(odli_cohort_t * cohort, const odli_log_t * log)
{
  return guarded([&] {
    need(cohort, "cohort");
    need(log, "log");
    cohort->logs.push_back(log->value);
  });
}

size_t odli_cohort_size(const odli_cohort_t * cohort)
{
  return cohort == nullptr ? 0 : cohort->logs.size();
}

odli_status odli_cohort_get_log(const odli_cohort_t * cohort, size_t index, odli_log_t ** out)
{
  return guarded([&] {
    need(cohort, "cohort");
    need(out, "out");
    if (index >= cohort->logs.size()) {
      odli::fail(odli::ErrorCode::invalid_argument, "cohort index out of range");
    }
    *out = new odli_log{cohort->logs[index]};
  });
}

odli_status odli_cohort_save(const odli_cohort_t * cohort, const char * directory)
{
  return guarded([&] {
    need(cohort, "cohort");
    need(directory, "directory");
    odli::ensure_directory(directory);
    for (std::size_t i = 0; i < cohort->logs.size(); ++i) {
      const auto & log = cohort->logs[i];
      const auto name = log.label.empty() ? "run-" + std::to_string(i) : log.label;
      odli::save_trajectory_log(log, (std::filesystem::path(directory) / (name + ".csv")).string());
    }
  });
}

void odli_cohort_destroy(odli_cohort_t * cohort)
{
  delete cohort;
}

odli_status odli_analyze_responses(
  const odli_config_t * config, const odli_cohort_t * cohort, char ** out_csv)
{
  return guarded([&] {
    need(config, "config");
    need(cohort, "cohort");
    need(out_csv, "out_csv");
    *out_csv = dup_string(table_text(odli::responses_table(cohort->logs, config->value.analysis)));
  });
}

odli_status odli_analyze_sequence(
  const odli_config_t * config, const odli_cohort_t * cohort, char ** out_csv)
{
  return guarded([&] {
    need(config, "config");
    need(cohort, "cohort");
    need(out_csv, "out_csv");
    const auto graph = odli::analyze_sequence(cohort->logs, config->value.analysis);
    *out_csv = dup_string(table_text(odli::sequence_graph_table(graph)));
  });
}

odli_status odli_reach_compute(
  const odli_config_t * config, const odli_log_t * log, double t, char ** out_csv, char ** out_svg,
  int * out_exists)
{
  return guarded([&] {
    need(config, "config");
    need(log, "log");
    need(out_csv, "out_csv");
    const auto area = odli::drivable_area_at(log->value, t, config->value);
    auto csv = table_text(odli::reach_snapshot_table(area));
    std::string svg;
    if (out_svg != nullptr) {
      svg = odli::reach_snapshot_svg(
        area, odli::world_state_at(log->value, log->value.index_at(t)), log->value.scenario);
    }
    *out_csv = dup_string(csv);
    if (out_svg != nullptr) *out_svg = dup_string(svg);
    if (out_exists != nullptr) *out_exists = area.exists ? 1 : 0;
  });
}

odli_status odli_reach_timeline(const odli_config_t * config, const odli_log_t * log, char ** out_csv)
{
  return guarded([&] {
    need(config, "config");
    need(log, "log");
    need(out_csv, "out_csv");
    const auto timelines = odli::cohort_timelines({&log->value, 1}, config->value);
    *out_csv = dup_string(table_text(odli::timeline_table(timelines.front())));
  });
}

odli_status odli_reach_aggregate(
  const odli_config_t * config, const odli_cohort_t * cohort, char ** out_csv)
{
  return guarded([&] {
    need(config, "config");
    need(cohort, "cohort");
    need(out_csv, "out_csv");
    const auto timelines = odli::cohort_timelines(cohort->logs, config->value);
    const auto points = odli::aggregate_prevalence(timelines, config->value.bootstrap);
    *out_csv = dup_string(table_text(odli::prevalence_table(points)));
  });
}

odli_status odli_oracle_verify(const odli_config_t * config, char ** out_csv, int * out_sound)
{
  return guarded([&] {
    need(config, "config");
    need(out_csv, "out_csv");
    const auto & c = config->value;
    const auto report = odli::verify_soundness(
      c.oracle_incursion_levels, c.scenario, c.prediction, c.oracle, c.simulation.dt);
    *out_csv = dup_string(table_text(odli::oracle_table(report)));
    if (out_sound != nullptr) *out_sound = report.sound() ? 1 : 0;
  });
}

}  // extern "C"
