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

#ifndef ODLI_ODLI_H_
#define ODLI_ODLI_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define ODLI_API __declspec(dllexport)
#else
#define ODLI_API __attribute__((visibility("default")))
#endif

typedef enum odli_status {
  ODLI_OK = 0,
  ODLI_ERR_INVALID_ARGUMENT = 1,
  ODLI_ERR_PARSE = 2,
  ODLI_ERR_IO = 3,
  ODLI_ERR_INCOMPLETE_LOG = 4,
  ODLI_ERR_INTERNAL = 5
} odli_status;

typedef struct odli_config odli_config_t;
typedef struct odli_log odli_log_t;
typedef struct odli_cohort odli_cohort_t;

/* Message describing the most recent failure on the calling thread; empty after success. */
ODLI_API const char * odli_last_error_message(void);
ODLI_API const char * odli_status_name(odli_status status);
ODLI_API const char * odli_version(void);

/* Strings returned through char ** out-parameters are owned by the caller. */
ODLI_API void odli_string_free(char * text);

ODLI_API odli_status odli_config_create_default(odli_config_t ** out);
ODLI_API odli_status odli_config_load(const char * path, odli_config_t ** out);
ODLI_API odli_status odli_config_from_json(const char * json, odli_config_t ** out);
ODLI_API odli_status odli_config_to_json(const odli_config_t * config, char ** out_json);
ODLI_API odli_status odli_config_save(const odli_config_t * config, const char * path);
/* Dotted paths address config fields, e.g. "scenario.incursion_level" or "prediction.grid_dx". */
ODLI_API odli_status odli_config_set_number(odli_config_t * config, const char * path, double value);
ODLI_API odli_status odli_config_set_string(odli_config_t * config, const char * path, const char * value);
/* Replaces the value at `path` with a JSON fragment, e.g. "[0.9]" for oracle_incursion_levels. */
ODLI_API odli_status odli_config_set_json(odli_config_t * config, const char * path, const char * json);
ODLI_API odli_status odli_config_get_number(const odli_config_t * config, const char * path, double * out);
ODLI_API void odli_config_destroy(odli_config_t * config);

typedef struct odli_log_summary {
  size_t samples;
  double dt;
  double t_start;
  double t_end;
  double t_trigger;
  double incursion_level;
  int incomplete;
} odli_log_summary;

/* Runs the config's sv_policy. */
ODLI_API odli_status odli_simulate(const odli_config_t * config, odli_log_t ** out);
ODLI_API odli_status odli_log_load(const char * path, odli_log_t ** out);
ODLI_API odli_status odli_log_save(const odli_log_t * log, const char * path);
ODLI_API odli_status odli_log_summary_get(const odli_log_t * log, odli_log_summary * out);
ODLI_API void odli_log_destroy(odli_log_t * log);

ODLI_API odli_status odli_cohort_simulate(const odli_config_t * config, odli_cohort_t ** out);
ODLI_API odli_status odli_cohort_create(odli_cohort_t ** out);
/* Copies the log into the cohort. */
ODLI_API odli_status odli_cohort_add_log(odli_cohort_t * cohort, const odli_log_t * log);
ODLI_API size_t odli_cohort_size(const odli_cohort_t * cohort);
/* Returns a new handle holding a copy of log `index`. */
ODLI_API odli_status odli_cohort_get_log(const odli_cohort_t * cohort, size_t index, odli_log_t ** out);
/* Writes one <label>.csv (plus sidecar) per run into `directory`. */
ODLI_API odli_status odli_cohort_save(const odli_cohort_t * cohort, const char * directory);
ODLI_API void odli_cohort_destroy(odli_cohort_t * cohort);

/* Table outputs are CSV text: header row, units row, then data rows. */
ODLI_API odli_status odli_analyze_responses(
  const odli_config_t * config, const odli_cohort_t * cohort, char ** out_csv);
ODLI_API odli_status odli_analyze_sequence(
  const odli_config_t * config, const odli_cohort_t * cohort, char ** out_csv);

/* Drivable area at the sample nearest to t; `out_svg` may be NULL. `out_exists` may be NULL. */
ODLI_API odli_status odli_reach_compute(
  const odli_config_t * config, const odli_log_t * log, double t, char ** out_csv, char ** out_svg,
  int * out_exists);
ODLI_API odli_status odli_reach_timeline(
  const odli_config_t * config, const odli_log_t * log, char ** out_csv);
ODLI_API odli_status odli_reach_aggregate(
  const odli_config_t * config, const odli_cohort_t * cohort, char ** out_csv);

/* Sampling check of the reachable sets; `out_sound` receives 1 when every sample was contained. */
ODLI_API odli_status odli_oracle_verify(const odli_config_t * config, char ** out_csv, int * out_sound);

#ifdef __cplusplus
}
#endif

#endif  /* ODLI_ODLI_H_ */
