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

#include "tris/tris.h"

#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <new>
#include <string>

#include "tris/aodriver.hpp"
#include "tris/error.hpp"
#include "tris/harness.hpp"

struct tris_config {
  tris::SystemConfig cfg;
};

struct tris_channel {
  tris::SystemConfig cfg;
  tris::ChannelRealization real;
};

struct tris_solution {
  tris::SystemConfig cfg;
  tris::ChannelRealization real;
  tris::AoResult result;
};

struct tris_spec {
  tris::ExperimentSpec spec;
};

namespace {

thread_local std::string g_last_error;

tris_status to_status(tris::ErrorCode code) {
  switch (code) {
    case tris::ErrorCode::invalid_argument: return TRIS_ERR_INVALID_ARGUMENT;
    case tris::ErrorCode::parse: return TRIS_ERR_PARSE;
    case tris::ErrorCode::geometry: return TRIS_ERR_GEOMETRY;
    case tris::ErrorCode::infeasible: return TRIS_ERR_INFEASIBLE;
    case tris::ErrorCode::io: return TRIS_ERR_IO;
    case tris::ErrorCode::too_large: return TRIS_ERR_TOO_LARGE;
    case tris::ErrorCode::internal: return TRIS_ERR_INTERNAL;
  }
  return TRIS_ERR_INTERNAL;
}

template <class Fn>
tris_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return TRIS_OK;
  } catch (const tris::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return TRIS_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return TRIS_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) tris::fail(tris::ErrorCode::invalid_argument, what);
}

}  // namespace

extern "C" {

const char* tris_version(void) { return "0.1.0"; }

const char* tris_status_name(tris_status status) {
  switch (status) {
    case TRIS_OK: return "ok";
    case TRIS_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case TRIS_ERR_PARSE: return "parse";
    case TRIS_ERR_GEOMETRY: return "geometry";
    case TRIS_ERR_INFEASIBLE: return "infeasible";
    case TRIS_ERR_IO: return "io";
    case TRIS_ERR_TOO_LARGE: return "too_large";
    case TRIS_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* tris_last_error(void) { return g_last_error.c_str(); }

tris_status tris_config_create(tris_config** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = new tris_config{};
  });
}

tris_status tris_config_load(const char* path, tris_config** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    auto cfg = tris::load_config(path);
    *out = new tris_config{std::move(cfg)};
  });
}

tris_status tris_config_save(const tris_config* cfg, const char* path) {
  return guarded([&] {
    require(cfg != nullptr && path != nullptr, "null argument");
    std::ofstream out(path);
    if (!out) tris::fail(tris::ErrorCode::io, std::string("cannot write '") + path + "'");
    tris::write_config(cfg->cfg, out);
  });
}

tris_status tris_config_set(tris_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg != nullptr && key != nullptr && value != nullptr, "null argument");
    tris::set_config_value(cfg->cfg, key, value);
  });
}

tris_status tris_config_get(const tris_config* cfg, const char* key, char* buf, size_t buf_size, size_t* needed) {
  return guarded([&] {
    require(cfg != nullptr && key != nullptr, "null argument");
    const std::string value = tris::get_config_value(cfg->cfg, key);
    if (needed != nullptr) *needed = value.size() + 1;
    if (buf != nullptr && buf_size > value.size()) std::memcpy(buf, value.c_str(), value.size() + 1);
    else if (buf != nullptr) tris::fail(tris::ErrorCode::invalid_argument, "buffer too small");
  });
}

tris_status tris_config_validate(const tris_config* cfg) {
  return guarded([&] {
    require(cfg != nullptr, "null argument");
    cfg->cfg.validate();
  });
}

size_t tris_config_key_count(void) { return tris::config_keys().size(); }

const char* tris_config_key_name(size_t index) {
  const auto keys = tris::config_keys();
  // Keys are views of static string literals.
  return index < keys.size() ? keys[index].data() : nullptr;
}

void tris_config_destroy(tris_config* cfg) { delete cfg; }

tris_status tris_channel_generate(const tris_config* cfg, uint64_t seed, tris_channel** out) {
  return guarded([&] {
    require(cfg != nullptr && out != nullptr, "null argument");
    auto real = tris::generate_channel(cfg->cfg, seed);
    *out = new tris_channel{cfg->cfg, std::move(real)};
  });
}

tris_status tris_channel_export_csv(const tris_channel* channel, const char* path) {
  return guarded([&] {
    require(channel != nullptr && path != nullptr, "null argument");
    std::ofstream out(path);
    if (!out) tris::fail(tris::ErrorCode::io, std::string("cannot write '") + path + "'");
    tris::write_channel_csv(channel->real, out);
  });
}

double tris_channel_rayleigh_distance(const tris_channel* channel) { return channel ? channel->real.rayleigh : 0.0; }

void tris_channel_destroy(tris_channel* channel) { delete channel; }

tris_status tris_solve(const tris_config* cfg, const tris_channel* channel, const char* algorithm, tris_solution** out) {
  return guarded([&] {
    require(cfg != nullptr && channel != nullptr && out != nullptr, "null argument");
    const std::string alg = algorithm ? algorithm : "proposed";
    cfg->cfg.validate();
    if (cfg->cfg.num_users != channel->real.num_users || cfg->cfg.num_subcarriers != channel->real.num_subcarriers ||
        cfg->cfg.num_elements() != channel->real.num_elements)
      tris::fail(tris::ErrorCode::invalid_argument, "config does not match the channel dimensions");
    const tris::AoParams params;
    tris::AoResult result;
    if (alg == "proposed") result = tris::alternate(channel->real, cfg->cfg, params);
    else if (alg == "three_stage") result = tris::three_stage(channel->real, cfg->cfg, params);
    else tris::fail(tris::ErrorCode::invalid_argument, "unknown algorithm '" + alg + "'");
    *out = new tris_solution{cfg->cfg, channel->real, std::move(result)};
  });
}

double tris_solution_sum_rate(const tris_solution* sol) { return sol ? sol->result.solution.sum_rate : 0.0; }
int tris_solution_iterations(const tris_solution* sol) { return sol ? sol->result.report.iterations : 0; }
int tris_solution_converged(const tris_solution* sol) { return sol && sol->result.report.converged ? 1 : 0; }
int tris_solution_infeasible(const tris_solution* sol) { return sol && sol->result.report.infeasible ? 1 : 0; }
int tris_solution_num_users(const tris_solution* sol) { return sol ? sol->real.num_users : 0; }

double tris_solution_user_rate(const tris_solution* sol, int k) {
  if (!sol || k < 0 || k >= sol->result.solution.user_rates.size()) return 0.0;
  return sol->result.solution.user_rates[k];
}

size_t tris_solution_trace_length(const tris_solution* sol) { return sol ? sol->result.report.trace.size() : 0; }

double tris_solution_trace_value(const tris_solution* sol, size_t index) {
  if (!sol || index >= sol->result.report.trace.size()) return 0.0;
  return sol->result.report.trace[index];
}

int tris_solution_num_elements(const tris_solution* sol) { return sol ? sol->real.num_elements : 0; }

tris_status tris_solution_coefficient(const tris_solution* sol, int m, double* re, double* im) {
  return guarded([&] {
    require(sol != nullptr && re != nullptr && im != nullptr, "null argument");
    const auto& c = sol->result.solution.coefficient;
    require(m >= 0 && m < c.size(), "element index out of range");
    *re = c[m].real();
    *im = c[m].imag();
  });
}

double tris_solution_rank_gap(const tris_solution* sol) {
  if (!sol || sol->result.report.sca_reports.empty()) return 0.0;
  return sol->result.report.sca_reports.back().rank_gap;
}

tris_status tris_solution_write_bundle(const tris_solution* sol, const char* dir) {
  return guarded([&] {
    require(sol != nullptr && dir != nullptr, "null argument");
    tris::write_solution_bundle(dir, sol->cfg, sol->real, sol->result);
  });
}

void tris_solution_destroy(tris_solution* sol) { delete sol; }

tris_status tris_spec_load(const char* path, tris_spec** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    auto spec = tris::load_spec(path);
    *out = new tris_spec{std::move(spec)};
  });
}

tris_status tris_spec_set(tris_spec* spec, const char* key, const char* value) {
  return guarded([&] {
    require(spec != nullptr && key != nullptr && value != nullptr, "null argument");
    tris::set_spec_value(spec->spec, key, value, "");
  });
}

int tris_spec_has_seed(const tris_spec* spec) { return spec && spec->spec.seed ? 1 : 0; }

void tris_spec_destroy(tris_spec* spec) { delete spec; }

tris_status tris_run_benchmark(const tris_spec* spec, const uint64_t* seed, const char* out_dir, int threads,
                               tris_progress_fn progress, void* user) {
  return guarded([&] {
    require(spec != nullptr && out_dir != nullptr, "null argument");
    if (seed == nullptr && !spec->spec.seed)
      tris::fail(tris::ErrorCode::invalid_argument, "benchmark needs a seed (command line or spec file)");
    const std::uint64_t master = seed != nullptr ? *seed : *spec->spec.seed;
    tris::ProgressFn fn;
    if (progress != nullptr) fn = [&](int done, int total) { progress(done, total, user); };
    const auto result = tris::run_benchmark(spec->spec, master, tris::AoParams{},
                                            threads > 0 ? threads : tris::default_threads(), fn);
    tris::write_benchmark(result, spec->spec, out_dir);
  });
}

tris_status tris_run_convergence(const tris_config* cfg, const double* p_max, size_t count, int trials, uint64_t seed,
                                 const char* out_csv, int threads) {
  return guarded([&] {
    require(cfg != nullptr && p_max != nullptr && out_csv != nullptr, "null argument");
    const std::vector<double> values(p_max, p_max + count);
    const auto rows = tris::run_convergence(cfg->cfg, values, trials, seed, tris::AoParams{},
                                            threads > 0 ? threads : tris::default_threads());
    const auto parent = std::filesystem::path(out_csv).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(out_csv, std::ios::binary);
    if (!out) tris::fail(tris::ErrorCode::io, std::string("cannot write '") + out_csv + "'");
    tris::write_convergence_csv(rows, out);
  });
}

tris_status tris_oracle_check(int instances, uint64_t seed, tris_line_fn line, void* user, int* all_passed) {
  return guarded([&] {
    const bool ok = tris::oracle_check(instances, seed, [&](const std::string& text) {
      if (line != nullptr) line(text.c_str(), user);
    });
    if (all_passed != nullptr) *all_passed = ok ? 1 : 0;
  });
}

}  // extern "C"
