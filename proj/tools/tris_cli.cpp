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

// Command line front end. Links only the C interface.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tris/tris.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

int exit_code(tris_status s) {
  switch (s) {
    case TRIS_OK: return kExitOk;
    case TRIS_ERR_INVALID_ARGUMENT:
    case TRIS_ERR_PARSE:
    case TRIS_ERR_GEOMETRY: return kExitUsage;
    case TRIS_ERR_INFEASIBLE: return kExitInfeasible;
    default: return kExitFailure;
  }
}

std::string quoted(const std::string& text) {
  std::string out;
  for (char ch : text) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch == '\n' ? ' ' : ch;
  }
  return out;
}

int report(const char* code, const std::string& message, int status) {
  std::cerr << "error: code=" << code << " message=\"" << quoted(message) << "\"\n";
  return status;
}

int report(tris_status s) { return report(tris_status_name(s), tris_last_error(), exit_code(s)); }

// RAII holders for the C handles.
template <class T, void (*Destroy)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() {
    if (ptr) Destroy(ptr);
  }
};
using ConfigHandle = Handle<tris_config, tris_config_destroy>;
using ChannelHandle = Handle<tris_channel, tris_channel_destroy>;
using SolutionHandle = Handle<tris_solution, tris_solution_destroy>;
using SpecHandle = Handle<tris_spec, tris_spec_destroy>;

struct ScenarioOptions {
  std::string config_path;
  std::map<std::string, std::string> overrides;
};

void add_scenario_options(CLI::App* app, ScenarioOptions& opts) {
  app->add_option("--config", opts.config_path, "Scenario config file (key = value)");
  for (std::size_t i = 0; i < tris_config_key_count(); ++i) {
    const std::string key = tris_config_key_name(i);
    app->add_option_function<std::string>(
           "--" + key, [&opts, key](const std::string& v) { opts.overrides[key] = v; }, "Override config key " + key)
        ->group("Config overrides");
  }
}

tris_status load_scenario(const ScenarioOptions& opts, ConfigHandle& cfg) {
  tris_status s = opts.config_path.empty() ? tris_config_create(&cfg.ptr) : tris_config_load(opts.config_path.c_str(), &cfg.ptr);
  if (s != TRIS_OK) return s;
  for (const auto& [key, value] : opts.overrides)
    if ((s = tris_config_set(cfg.ptr, key.c_str(), value.c_str())) != TRIS_OK) return s;
  return tris_config_validate(cfg.ptr);
}

std::uint64_t config_seed(const tris_config* cfg) {
  char buf[64];
  size_t needed = 0;
  if (tris_config_get(cfg, "rng_seed", buf, sizeof buf, &needed) != TRIS_OK) return 1;
  return std::stoull(buf);
}

void print_line(const char* line, void*) { std::cout << line << '\n'; }

void print_progress(int done, int total, void*) {
  if (done == total || done % 10 == 0) std::cerr << "\rtrials " << done << '/' << total << (done == total ? "\n" : "") << std::flush;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transmissive RIS uplink OFDMA optimizer"};
  app.set_version_flag("--version", std::string(tris_version()));
  app.require_subcommand(1);

  ScenarioOptions solve_opts;
  std::string solve_out = "solution";
  std::string algorithm = "proposed";
  std::uint64_t solve_seed = 0;
  auto* solve = app.add_subcommand("solve", "Solve one scenario and write a solution bundle");
  add_scenario_options(solve, solve_opts);
  auto* solve_seed_opt = solve->add_option("--seed", solve_seed, "Channel seed (default: rng_seed of the config)");
  solve->add_option("--out", solve_out, "Bundle directory");
  solve->add_option("--algorithm", algorithm, "proposed | three_stage")->check(CLI::IsMember({"proposed", "three_stage"}));

  std::string spec_path;
  std::string bench_out = "benchmark";
  std::uint64_t bench_seed = 0;
  int threads = 0;
  bool quiet = false;
  std::vector<std::string> spec_overrides;
  auto* bench = app.add_subcommand("benchmark", "Run a sweep experiment");
  bench->add_option("--spec", spec_path, "Sweep spec file")->required();
  auto* bench_seed_opt = bench->add_option("--seed", bench_seed, "Master seed (overrides the spec file)");
  bench->add_option("--out", bench_out, "Output directory");
  bench->add_option("--threads", threads, "Worker threads (default: hardware concurrency)");
  bench->add_option("--set", spec_overrides, "Spec override key=value (repeatable)");
  bench->add_flag("--quiet", quiet, "No progress output");

  ScenarioOptions conv_opts;
  std::vector<double> conv_pmax{0.05, 0.1, 0.15, 0.2};
  int conv_trials = 10;
  std::uint64_t conv_seed = 1;
  std::string conv_out = "convergence.csv";
  auto* conv = app.add_subcommand("convergence", "Objective traces of the proposed algorithm per p_max");
  add_scenario_options(conv, conv_opts);
  conv->add_option("--p-max", conv_pmax, "Power budgets in W")->delimiter(',');
  conv->add_option("--trials", conv_trials, "Scenarios per budget");
  conv->add_option("--seed", conv_seed, "Master seed");
  conv->add_option("--out", conv_out, "Output CSV");
  conv->add_option("--threads", threads, "Worker threads (default: hardware concurrency)");

  int instances = 20;
  std::uint64_t oracle_seed = 1;
  auto* oracle = app.add_subcommand("oracle-check", "Compare the solvers with exhaustive search on tiny instances");
  oracle->add_option("--instances", instances, "Instances per check");
  oracle->add_option("--seed", oracle_seed, "Seed");

  ScenarioOptions export_opts;
  std::string export_out = "channels.csv";
  std::uint64_t export_seed = 0;
  auto* exporter = app.add_subcommand("export-channels", "Write a channel realization as CSV");
  add_scenario_options(exporter, export_opts);
  auto* export_seed_opt = exporter->add_option("--seed", export_seed, "Channel seed (default: rng_seed of the config)");
  exporter->add_option("--out", export_out, "Output CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("usage", e.what(), kExitUsage);
  }

  tris_status s = TRIS_OK;
  if (*solve) {
    ConfigHandle cfg;
    if ((s = load_scenario(solve_opts, cfg)) != TRIS_OK) return report(s);
    const std::uint64_t seed = *solve_seed_opt ? solve_seed : config_seed(cfg.ptr);
    ChannelHandle ch;
    if ((s = tris_channel_generate(cfg.ptr, seed, &ch.ptr)) != TRIS_OK) return report(s);
    SolutionHandle sol;
    if ((s = tris_solve(cfg.ptr, ch.ptr, algorithm.c_str(), &sol.ptr)) != TRIS_OK) return report(s);
    if ((s = tris_solution_write_bundle(sol.ptr, solve_out.c_str())) != TRIS_OK) return report(s);
    if (tris_solution_infeasible(sol.ptr))
      return report("infeasible", "no allocation meets every rate floor", kExitInfeasible);
    std::printf("sum_rate_bps=%.6f iterations=%d converged=%d bundle=%s\n", tris_solution_sum_rate(sol.ptr),
                tris_solution_iterations(sol.ptr), tris_solution_converged(sol.ptr), solve_out.c_str());
    return kExitOk;
  }
  if (*bench) {
    SpecHandle spec;
    if ((s = tris_spec_load(spec_path.c_str(), &spec.ptr)) != TRIS_OK) return report(s);
    for (const auto& kv : spec_overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) return report("usage", "--set expects key=value", kExitUsage);
      if ((s = tris_spec_set(spec.ptr, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str())) != TRIS_OK) return report(s);
    }
    if (!*bench_seed_opt && !tris_spec_has_seed(spec.ptr))
      return report("usage", "benchmark needs --seed or a seed entry in the spec file", kExitUsage);
    const std::uint64_t* seed = *bench_seed_opt ? &bench_seed : nullptr;
    s = tris_run_benchmark(spec.ptr, seed, bench_out.c_str(), threads, quiet ? nullptr : print_progress, nullptr);
    if (s != TRIS_OK) return report(s);
    std::printf("wrote %s/aggregate.csv\n", bench_out.c_str());
    return kExitOk;
  }
  if (*conv) {
    ConfigHandle cfg;
    if ((s = load_scenario(conv_opts, cfg)) != TRIS_OK) return report(s);
    s = tris_run_convergence(cfg.ptr, conv_pmax.data(), conv_pmax.size(), conv_trials, conv_seed, conv_out.c_str(), threads);
    if (s != TRIS_OK) return report(s);
    std::printf("wrote %s\n", conv_out.c_str());
    return kExitOk;
  }
  if (*oracle) {
    int passed = 0;
    if ((s = tris_oracle_check(instances, oracle_seed, print_line, nullptr, &passed)) != TRIS_OK) return report(s);
    std::printf("%s\n", passed ? "oracle-check: all passed" : "oracle-check: FAILED");
    return passed ? kExitOk : kExitFailure;
  }
  if (*exporter) {
    ConfigHandle cfg;
    if ((s = load_scenario(export_opts, cfg)) != TRIS_OK) return report(s);
    const std::uint64_t seed = *export_seed_opt ? export_seed : config_seed(cfg.ptr);
    ChannelHandle ch;
    if ((s = tris_channel_generate(cfg.ptr, seed, &ch.ptr)) != TRIS_OK) return report(s);
    if ((s = tris_channel_export_csv(ch.ptr, export_out.c_str())) != TRIS_OK) return report(s);
    std::printf("wrote %s\n", export_out.c_str());
    return kExitOk;
  }
  return kExitUsage;
}
