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

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tris/aodriver.hpp"
#include "tris/config.hpp"

namespace tris {

enum class SweepVar { p_max, users, subcarriers, elements };
enum class Algorithm { proposed, three_stage, random_coefficient, random_allocation };

const char* sweep_var_name(SweepVar var);
SweepVar parse_sweep_var(std::string_view text);  // p_max | K | N | M
const char* algorithm_name(Algorithm alg);
Algorithm parse_algorithm(std::string_view text);
const std::vector<Algorithm>& all_algorithms();

// Sweep spec file, `key = value` lines:
//   sweep_var   = p_max | K | N | M
//   values      = comma separated (p_max in W; M a perfect square)
//   trials      = trials per sweep point
//   algorithms  = comma separated subset (default: all four)
//   base_config = config file, relative to the spec file
//   seed        = master seed (optional; may come from the command line)
struct ExperimentSpec {
  SweepVar sweep_var = SweepVar::p_max;
  std::vector<double> values;
  int trials = 100;
  std::vector<Algorithm> algorithms = all_algorithms();
  SystemConfig base;
  std::optional<std::uint64_t> seed;

  void validate() const;
};

void set_spec_value(ExperimentSpec& spec, std::string_view key, std::string_view value, const std::string& base_dir);
ExperimentSpec parse_spec(std::istream& in, const std::string& base_dir);
ExperimentSpec load_spec(const std::string& path);

// Base config with the sweep variable set to `value`.
SystemConfig apply_sweep(const SystemConfig& base, SweepVar var, double value);

struct TrialOutcome {
  double sum_rate = 0.0;
  int iterations = 0;
  bool feasible = true;
};

// Runs one algorithm on a realization. `seed` drives the random schemes.
TrialOutcome run_algorithm(Algorithm alg, const ChannelRealization& real, const SystemConfig& cfg,
                           const AoParams& params, std::uint64_t seed);

// Unit-modulus coefficient with independent uniform phases.
CVector random_coefficient(int elements, Rng& rng);

// Subcarriers dealt round-robin to users over a random permutation, each
// user's budget split equally over its subcarriers.
AllocationState random_allocation(int users, int subcarriers, const SystemConfig& cfg, Rng& rng);

struct TrialRow {
  int trial = 0;
  std::uint64_t seed = 0;
  double sweep_value = 0.0;
  Algorithm algorithm = Algorithm::proposed;
  double sum_rate = 0.0;
  int iterations = 0;
  bool feasible = true;
};

struct AggregateRow {
  double sweep_value = 0.0;
  Algorithm algorithm = Algorithm::proposed;
  double mean = 0.0;    // bit/s over feasible trials
  double stderr_ = 0.0; // sample standard deviation / sqrt(n_ok)
  int n_ok = 0;
  int n_infeasible = 0;
  double spectral_efficiency = 0.0;  // mean / total bandwidth
};

struct BenchmarkResult {
  std::vector<TrialRow> trials;
  std::vector<AggregateRow> aggregates;
};

using ProgressFn = std::function<void(int done, int total)>;

// Trial seeds are derive_seed(master, trial), shared by every sweep point and
// algorithm. Results are independent of the thread count.
BenchmarkResult run_benchmark(const ExperimentSpec& spec, std::uint64_t master_seed, const AoParams& params,
                              int threads, const ProgressFn& progress = {});

std::vector<AggregateRow> aggregate(const std::vector<TrialRow>& rows, const ExperimentSpec& spec);

void write_trials_csv(const std::vector<TrialRow>& rows, std::ostream& out);
std::vector<TrialRow> read_trials_csv(std::istream& in);
void write_aggregate_csv(const std::vector<AggregateRow>& rows, std::ostream& out);
// One row per sweep value, one mean column per algorithm.
void write_plot_csv(const std::vector<AggregateRow>& rows, const std::vector<Algorithm>& algorithms, std::ostream& out);

// Writes trials.csv, aggregate.csv and plot_data.csv into `dir`.
void write_benchmark(const BenchmarkResult& result, const ExperimentSpec& spec, const std::string& dir);

struct ConvergenceRow {
  double p_max = 0.0;
  int trial = 0;
  int iteration = 0;
  double sum_rate = 0.0;
};

// Proposed algorithm traces for each p_max on `trials` seeded scenarios.
std::vector<ConvergenceRow> run_convergence(const SystemConfig& base, const std::vector<double>& p_max,
                                            int trials, std::uint64_t master_seed, const AoParams& params,
                                            int threads);
void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out);

using LineFn = std::function<void(const std::string&)>;

// Small oracle comparisons: dual allocation against exhaustive search
// (K = N = 2) and the RIS stage against the phase grid (K = N = 1, M = 2).
// Emits one line per check and returns true when all pass.
bool oracle_check(int instances, std::uint64_t seed, const LineFn& line);

// Solution bundle: config.cfg, allocation.csv, coefficient.csv, trace.csv,
// dual_trace.csv, sca_trace.csv and summary.json.
void write_solution_bundle(const std::string& dir, const SystemConfig& cfg, const ChannelRealization& real,
                           const AoResult& result);

int default_threads();

}  // namespace tris
