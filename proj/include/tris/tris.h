// SPDX-License-Identifier: Apache-2.0
//
// tris: transmissive RIS uplink OFDMA optimization toolkit
// Copyright (C) 2026 The tris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/* C interface of the tris library. Every object is an opaque handle created
 * and destroyed through this header; every fallible call returns a
 * tris_status and leaves a message for tris_last_error() on failure. */
#ifndef TRIS_TRIS_H
#define TRIS_TRIS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TRIS_BUILDING_LIBRARY)
#    define TRIS_API __declspec(dllexport)
#  else
#    define TRIS_API __declspec(dllimport)
#  endif
#else
#  define TRIS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tris_status {
  TRIS_OK = 0,
  TRIS_ERR_INVALID_ARGUMENT = 1,
  TRIS_ERR_PARSE = 2,
  TRIS_ERR_GEOMETRY = 3,
  TRIS_ERR_INFEASIBLE = 4,
  TRIS_ERR_IO = 5,
  TRIS_ERR_TOO_LARGE = 6,
  TRIS_ERR_INTERNAL = 7
} tris_status;

typedef struct tris_config tris_config;
typedef struct tris_channel tris_channel;
typedef struct tris_solution tris_solution;
typedef struct tris_spec tris_spec;

typedef void (*tris_line_fn)(const char* line, void* user);
typedef void (*tris_progress_fn)(int done, int total, void* user);

TRIS_API const char* tris_version(void);
TRIS_API const char* tris_status_name(tris_status status);
/* Message of the last failed call on this thread; empty if none. */
TRIS_API const char* tris_last_error(void);

/* Scenario configuration. Keys are the flat config-file keys. */
TRIS_API tris_status tris_config_create(tris_config** out);
TRIS_API tris_status tris_config_load(const char* path, tris_config** out);
TRIS_API tris_status tris_config_save(const tris_config* cfg, const char* path);
TRIS_API tris_status tris_config_set(tris_config* cfg, const char* key, const char* value);
/* Copies the value with its terminator into buf when it fits; *needed (if
 * non-null) receives the required size including the terminator. */
TRIS_API tris_status tris_config_get(const tris_config* cfg, const char* key, char* buf, size_t buf_size,
                                     size_t* needed);
TRIS_API tris_status tris_config_validate(const tris_config* cfg);
TRIS_API size_t tris_config_key_count(void);
TRIS_API const char* tris_config_key_name(size_t index);
TRIS_API void tris_config_destroy(tris_config* cfg);

/* Channel realization, a pure function of (config, seed). */
TRIS_API tris_status tris_channel_generate(const tris_config* cfg, uint64_t seed, tris_channel** out);
TRIS_API tris_status tris_channel_export_csv(const tris_channel* channel, const char* path);
TRIS_API double tris_channel_rayleigh_distance(const tris_channel* channel);
TRIS_API void tris_channel_destroy(tris_channel* channel);

/* algorithm: "proposed" (alternating optimization) or "three_stage". An
 * infeasible instance still yields a solution; check
 * tris_solution_infeasible(). */
TRIS_API tris_status tris_solve(const tris_config* cfg, const tris_channel* channel, const char* algorithm,
                                tris_solution** out);
TRIS_API double tris_solution_sum_rate(const tris_solution* sol);
TRIS_API int tris_solution_iterations(const tris_solution* sol);
TRIS_API int tris_solution_converged(const tris_solution* sol);
TRIS_API int tris_solution_infeasible(const tris_solution* sol);
TRIS_API int tris_solution_num_users(const tris_solution* sol);
TRIS_API double tris_solution_user_rate(const tris_solution* sol, int k);
TRIS_API size_t tris_solution_trace_length(const tris_solution* sol);
TRIS_API double tris_solution_trace_value(const tris_solution* sol, size_t index);
TRIS_API int tris_solution_num_elements(const tris_solution* sol);
TRIS_API tris_status tris_solution_coefficient(const tris_solution* sol, int m, double* re, double* im);
TRIS_API double tris_solution_rank_gap(const tris_solution* sol);
TRIS_API tris_status tris_solution_write_bundle(const tris_solution* sol, const char* dir);
TRIS_API void tris_solution_destroy(tris_solution* sol);

/* Sweep experiments. */
TRIS_API tris_status tris_spec_load(const char* path, tris_spec** out);
/* Relative base_config paths resolve against the working directory. */
TRIS_API tris_status tris_spec_set(tris_spec* spec, const char* key, const char* value);
TRIS_API int tris_spec_has_seed(const tris_spec* spec);
TRIS_API void tris_spec_destroy(tris_spec* spec);
/* seed may be null to use the spec file's seed; it is an error if neither is
 * given. threads <= 0 selects the hardware concurrency. Writes trials.csv,
 * aggregate.csv and plot_data.csv into out_dir. */
TRIS_API tris_status tris_run_benchmark(const tris_spec* spec, const uint64_t* seed, const char* out_dir, int threads,
                                        tris_progress_fn progress, void* user);
/* Writes p_max,trial,iteration,sum_rate_bps rows to out_csv. */
TRIS_API tris_status tris_run_convergence(const tris_config* cfg, const double* p_max, size_t count, int trials,
                                          uint64_t seed, const char* out_csv, int threads);
TRIS_API tris_status tris_oracle_check(int instances, uint64_t seed, tris_line_fn line, void* user, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif /* TRIS_TRIS_H */
