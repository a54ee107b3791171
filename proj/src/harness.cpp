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

#include "tris/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "tris/error.hpp"
#include "tris/oracle.hpp"

namespace tris {

namespace {

constexpr std::uint64_t kTagRandomCoefficient = 0x52434f45ULL;
constexpr std::uint64_t kTagRandomAllocation = 0x52414c4cULL;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write '" + path.string() + "'");
  return out;
}

template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::string format_sweep_value(double v) { return format_double(v); }

}  // namespace

const char* sweep_var_name(SweepVar var) {
  switch (var) {
    case SweepVar::p_max: return "p_max";
    case SweepVar::users: return "K";
    case SweepVar::subcarriers: return "N";
    case SweepVar::elements: return "M";
  }
  return "?";
}

SweepVar parse_sweep_var(std::string_view text) {
  text = trim(text);
  if (text == "p_max") return SweepVar::p_max;
  if (text == "K") return SweepVar::users;
  if (text == "N") return SweepVar::subcarriers;
  if (text == "M") return SweepVar::elements;
  fail(ErrorCode::parse, "unknown sweep variable '" + std::string(text) + "'");
}

const char* algorithm_name(Algorithm alg) {
  switch (alg) {
    case Algorithm::proposed: return "proposed";
    case Algorithm::three_stage: return "three_stage";
    case Algorithm::random_coefficient: return "random_coefficient";
    case Algorithm::random_allocation: return "random_allocation";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view text) {
  text = trim(text);
  for (Algorithm a : all_algorithms())
    if (text == algorithm_name(a)) return a;
  fail(ErrorCode::parse, "unknown algorithm '" + std::string(text) + "'");
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> algs{Algorithm::proposed, Algorithm::three_stage, Algorithm::random_coefficient,
                                           Algorithm::random_allocation};
  return algs;
}

void ExperimentSpec::validate() const {
  if (values.empty()) fail(ErrorCode::invalid_argument, "spec: values must not be empty");
  if (trials < 1) fail(ErrorCode::invalid_argument, "spec: trials must be >= 1");
  if (algorithms.empty()) fail(ErrorCode::invalid_argument, "spec: no algorithms selected");
  for (double v : values) apply_sweep(base, sweep_var, v).validate();
}

void set_spec_value(ExperimentSpec& spec, std::string_view key, std::string_view value, const std::string& base_dir) {
  key = trim(key);
  value = trim(value);
  if (key == "sweep_var") {
    spec.sweep_var = parse_sweep_var(value);
  } else if (key == "values") {
    spec.values = parse_list(value);
  } else if (key == "trials") {
    spec.trials = parse_int(value);
  } else if (key == "algorithms") {
    spec.algorithms.clear();
    for (auto item : split(value, ',')) spec.algorithms.push_back(parse_algorithm(item));
  } else if (key == "base_config") {
    std::filesystem::path p{std::string(value)};
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    spec.base = load_config(p.string());
  } else if (key == "seed") {
    spec.seed = parse_u64(value);
  } else {
    fail(ErrorCode::parse, "unknown spec key '" + std::string(key) + "'");
  }
}

ExperimentSpec parse_spec(std::istream& in, const std::string& base_dir) {
  ExperimentSpec spec;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) fail(ErrorCode::parse, "spec line " + std::to_string(line_no) + ": expected key = value");
    try {
      set_spec_value(spec, view.substr(0, eq), view.substr(eq + 1), base_dir);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::io) throw;
      fail(ErrorCode::parse, "spec line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return spec;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open spec file '" + path + "'");
  return parse_spec(in, std::filesystem::path(path).parent_path().string());
}

SystemConfig apply_sweep(const SystemConfig& base, SweepVar var, double value) {
  SystemConfig cfg = base;
  auto as_count = [&](const char* what) {
    if (!(value >= 1.0) || value != std::floor(value) || value > 1e6)
      fail(ErrorCode::invalid_argument, std::string(what) + " sweep values must be positive integers");
    return static_cast<int>(value);
  };
  switch (var) {
    case SweepVar::p_max:
      cfg.max_power = {value};
      break;
    case SweepVar::users:
      cfg.num_users = as_count("K");
      if (!cfg.user_positions.empty() && static_cast<int>(cfg.user_positions.size()) != cfg.num_users)
        fail(ErrorCode::invalid_argument, "K sweep needs drawn user positions");
      break;
    case SweepVar::subcarriers:
      cfg.num_subcarriers = as_count("N");
      break;
    case SweepVar::elements: {
      const int m = as_count("M");
      const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
      if (side * side != m) fail(ErrorCode::invalid_argument, "M sweep values must be perfect squares");
      cfg.ris_rows = side;
      cfg.ris_cols = side;
      break;
    }
  }
  return cfg;
}

CVector random_coefficient(int elements, Rng& rng) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  CVector c(elements);
  for (int m = 0; m < elements; ++m) c[m] = std::polar(1.0, phase(rng));
  return c;
}

AllocationState random_allocation(int users, int subcarriers, const SystemConfig& cfg, Rng& rng) {
  std::vector<int> order(static_cast<std::size_t>(subcarriers));
  for (int n = 0; n < subcarriers; ++n) order[static_cast<std::size_t>(n)] = n;
  // Fisher-Yates with an explicit draw so the result does not depend on the
  // standard library's shuffle.
  for (int i = subcarriers - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  AllocationState s;
  s.owner.assign(static_cast<std::size_t>(subcarriers), -1);
  s.power = RMatrix::Zero(users, subcarriers);
  s.lambda = Eigen::VectorXd::Zero(users);
  s.mu = Eigen::VectorXd::Zero(users);
  std::vector<int> count(static_cast<std::size_t>(users), 0);
  for (int i = 0; i < subcarriers; ++i) {
    const int k = i % users;
    s.owner[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = k;
    ++count[static_cast<std::size_t>(k)];
  }
  for (int n = 0; n < subcarriers; ++n) {
    const int k = s.owner[static_cast<std::size_t>(n)];
    s.power(k, n) = cfg.user_max_power(k) / count[static_cast<std::size_t>(k)];
  }
  return s;
}

TrialOutcome run_algorithm(Algorithm alg, const ChannelRealization& real, const SystemConfig& cfg,
                           const AoParams& params, std::uint64_t seed) {
  TrialOutcome out;
  switch (alg) {
    case Algorithm::proposed: {
      const AoResult r = alternate(real, cfg, params);
      out.sum_rate = r.solution.sum_rate;
      out.iterations = r.report.iterations;
      out.feasible = !r.report.infeasible;
      break;
    }
    case Algorithm::three_stage: {
      const AoResult r = three_stage(real, cfg, params);
      out.sum_rate = r.solution.sum_rate;
      out.iterations = r.report.iterations;
      out.feasible = !r.report.infeasible;
      break;
    }
    case Algorithm::random_coefficient: {
      Rng rng(derive_seed(seed, kTagRandomCoefficient));
      const CVector c = random_coefficient(real.num_elements, rng);
      const AllocationResult ar = solve_allocation(gamma_table(real, c, cfg), cfg, params.dual);
      out.sum_rate = evaluate_objective(ar.state, c, real, cfg);
      out.iterations = ar.report.iterations;
      out.feasible = !ar.report.infeasible;
      break;
    }
    case Algorithm::random_allocation: {
      Rng rng(derive_seed(seed, kTagRandomAllocation));
      const AllocationState s = random_allocation(real.num_users, real.num_subcarriers, cfg, rng);
      const CVector c = random_coefficient(real.num_elements, rng);
      ObjectiveDiagnostics diag;
      out.sum_rate = evaluate_objective(s, c, real, cfg, &diag);
      out.feasible = diag.min_qos_slack >= 0.0;
      break;
    }
  }
  return out;
}

BenchmarkResult run_benchmark(const ExperimentSpec& spec, std::uint64_t master_seed, const AoParams& params,
                              int threads, const ProgressFn& progress) {
  spec.validate();
  const int points = static_cast<int>(spec.values.size());
  const int jobs = points * spec.trials;
  const auto algs = spec.algorithms;
  std::vector<std::vector<TrialRow>> slots(static_cast<std::size_t>(jobs));
  std::atomic<int> done{0};
  std::mutex progress_mutex;
  parallel_for(jobs, threads, [&](int job) {
    const int point = job / spec.trials;
    const int trial = job % spec.trials;
    const double value = spec.values[static_cast<std::size_t>(point)];
    const SystemConfig cfg = apply_sweep(spec.base, spec.sweep_var, value);
    const std::uint64_t seed = derive_seed(master_seed, static_cast<std::uint64_t>(trial));
    const ChannelRealization real = generate_channel(cfg, seed);
    auto& rows = slots[static_cast<std::size_t>(job)];
    for (Algorithm a : algs) {
      const TrialOutcome o = run_algorithm(a, real, cfg, params, seed);
      rows.push_back(TrialRow{trial, seed, value, a, o.sum_rate, o.iterations, o.feasible});
    }
    const int finished = ++done;
    if (progress) {
      std::lock_guard<std::mutex> lock(progress_mutex);
      progress(finished, jobs);
    }
  });
  BenchmarkResult result;
  for (auto& rows : slots) result.trials.insert(result.trials.end(), rows.begin(), rows.end());
  result.aggregates = aggregate(result.trials, spec);
  return result;
}

std::vector<AggregateRow> aggregate(const std::vector<TrialRow>& rows, const ExperimentSpec& spec) {
  std::vector<AggregateRow> out;
  for (double value : spec.values) {
    const double bandwidth = apply_sweep(spec.base, spec.sweep_var, value).total_bandwidth;
    for (Algorithm a : spec.algorithms) {
      AggregateRow agg;
      agg.sweep_value = value;
      agg.algorithm = a;
      double sum = 0.0;
      for (const auto& r : rows) {
        if (r.sweep_value != value || r.algorithm != a) continue;
        if (!r.feasible) {
          ++agg.n_infeasible;
          continue;
        }
        ++agg.n_ok;
        sum += r.sum_rate;
      }
      if (agg.n_ok > 0) agg.mean = sum / agg.n_ok;
      if (agg.n_ok > 1) {
        double ss = 0.0;
        for (const auto& r : rows)
          if (r.sweep_value == value && r.algorithm == a && r.feasible) ss += (r.sum_rate - agg.mean) * (r.sum_rate - agg.mean);
        agg.stderr_ = std::sqrt(ss / (agg.n_ok - 1)) / std::sqrt(static_cast<double>(agg.n_ok));
      }
      agg.spectral_efficiency = agg.mean / bandwidth;
      out.push_back(agg);
    }
  }
  return out;
}

void write_trials_csv(const std::vector<TrialRow>& rows, std::ostream& out) {
  out << "trial,seed,sweep_value,algorithm,sum_rate_bps,iterations,feasible\n";
  for (const auto& r : rows)
    out << r.trial << ',' << r.seed << ',' << format_sweep_value(r.sweep_value) << ',' << algorithm_name(r.algorithm)
        << ',' << format_double(r.sum_rate) << ',' << r.iterations << ',' << (r.feasible ? 1 : 0) << '\n';
}

std::vector<TrialRow> read_trials_csv(std::istream& in) {
  std::vector<TrialRow> rows;
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::parse, "trial CSV is empty");
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 7) fail(ErrorCode::parse, "trial CSV line " + std::to_string(line_no) + ": expected 7 fields");
    TrialRow r;
    r.trial = parse_int(f[0]);
    r.seed = parse_u64(f[1]);
    r.sweep_value = parse_double(f[2]);
    r.algorithm = parse_algorithm(f[3]);
    r.sum_rate = parse_double(f[4]);
    r.iterations = parse_int(f[5]);
    r.feasible = parse_int(f[6]) != 0;
    rows.push_back(r);
  }
  return rows;
}

void write_aggregate_csv(const std::vector<AggregateRow>& rows, std::ostream& out) {
  out << "sweep_value,algorithm,mean_sum_rate_bps,stderr_bps,n_ok,n_infeasible,mean_spectral_eff_bps_hz\n";
  for (const auto& r : rows)
    out << format_sweep_value(r.sweep_value) << ',' << algorithm_name(r.algorithm) << ',' << format_double(r.mean) << ','
        << format_double(r.stderr_) << ',' << r.n_ok << ',' << r.n_infeasible << ','
        << format_double(r.spectral_efficiency) << '\n';
}

void write_plot_csv(const std::vector<AggregateRow>& rows, const std::vector<Algorithm>& algorithms, std::ostream& out) {
  out << "sweep_value";
  for (Algorithm a : algorithms) out << ',' << algorithm_name(a);
  out << '\n';
  std::vector<double> values;
  for (const auto& r : rows)
    if (std::find(values.begin(), values.end(), r.sweep_value) == values.end()) values.push_back(r.sweep_value);
  for (double v : values) {
    out << format_sweep_value(v);
    for (Algorithm a : algorithms) {
      out << ',';
      for (const auto& r : rows)
        if (r.sweep_value == v && r.algorithm == a) out << format_double(r.mean);
    }
    out << '\n';
  }
}

void write_benchmark(const BenchmarkResult& result, const ExperimentSpec& spec, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  auto trials = open_out(base / "trials.csv");
  write_trials_csv(result.trials, trials);
  auto agg = open_out(base / "aggregate.csv");
  write_aggregate_csv(result.aggregates, agg);
  auto plot = open_out(base / "plot_data.csv");
  write_plot_csv(result.aggregates, spec.algorithms, plot);
}

std::vector<ConvergenceRow> run_convergence(const SystemConfig& base, const std::vector<double>& p_max,
                                            int trials, std::uint64_t master_seed, const AoParams& params,
                                            int threads) {
  if (p_max.empty() || trials < 1) fail(ErrorCode::invalid_argument, "convergence needs p_max values and trials >= 1");
  const int jobs = static_cast<int>(p_max.size()) * trials;
  std::vector<std::vector<ConvergenceRow>> slots(static_cast<std::size_t>(jobs));
  parallel_for(jobs, threads, [&](int job) {
    const int point = job / trials;
    const int trial = job % trials;
    const double p = p_max[static_cast<std::size_t>(point)];
    const SystemConfig cfg = apply_sweep(base, SweepVar::p_max, p);
    const ChannelRealization real = generate_channel(cfg, derive_seed(master_seed, static_cast<std::uint64_t>(trial)));
    const AoResult r = alternate(real, cfg, params);
    for (std::size_t t = 0; t < r.report.trace.size(); ++t)
      slots[static_cast<std::size_t>(job)].push_back(ConvergenceRow{p, trial, static_cast<int>(t), r.report.trace[t]});
  });
  std::vector<ConvergenceRow> rows;
  for (auto& s : slots) rows.insert(rows.end(), s.begin(), s.end());
  return rows;
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out) {
  out << "p_max,trial,iteration,sum_rate_bps\n";
  for (const auto& r : rows)
    out << format_double(r.p_max) << ',' << r.trial << ',' << r.iteration << ',' << format_double(r.sum_rate) << '\n';
}

bool oracle_check(int instances, std::uint64_t seed, const LineFn& line) {
  if (instances < 1) fail(ErrorCode::invalid_argument, "oracle check needs at least one instance");
  const AoParams params;
  bool all = true;

  SystemConfig small;
  small.num_users = 2;
  small.num_subcarriers = 2;
  small.ris_rows = 2;
  small.ris_cols = 2;
  small.min_rate = {0.0};
  small.antenna_offset = 0.02;  // keeps the tiny arrays in their near field
  int alloc_ok = 0;
  double alloc_worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < instances; ++i) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
    const ChannelRealization real = generate_channel(small, s);
    Rng rng(derive_seed(s, kTagRandomCoefficient));
    const GammaTable gamma = gamma_table(real, random_coefficient(real.num_elements, rng), small);
    const AllocationResult ar = solve_allocation(gamma, small, params.dual);
    const double dual = user_rates(ar.state.owner, ar.state.power, gamma, small.subcarrier_bandwidth()).sum();
    const double coarse = brute_force_allocation(gamma, small, OracleGrid{16, 16}).objective;
    const double fine = brute_force_allocation(gamma, small, OracleGrid{61, 16}).objective;
    const double ratio = dual / std::max(coarse, fine);
    alloc_worst = std::min(alloc_worst, ratio);
    if (dual >= 0.98 * coarse && dual >= 0.98 * fine) ++alloc_ok;
  }
  const bool alloc_pass = alloc_ok == instances;
  all = all && alloc_pass;
  line(std::string(alloc_pass ? "PASS" : "FAIL") + " allocation-vs-exhaustive K=2 N=2: " + std::to_string(alloc_ok) +
       "/" + std::to_string(instances) + " within 2%, worst ratio " + format_double(alloc_worst));

  SystemConfig toy;
  toy.num_users = 1;
  toy.num_subcarriers = 1;
  toy.ris_rows = 2;
  toy.ris_cols = 1;
  toy.antenna_offset = 0.02;
  int phase_ok = 0;
  double phase_worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < instances; ++i) {
    const std::uint64_t s = derive_seed(seed ^ 0x5048415345ULL, static_cast<std::uint64_t>(i));
    const ChannelRealization real = generate_channel(toy, s);
    AllocationState alloc;
    alloc.owner = {0};
    alloc.power = RMatrix::Constant(1, 1, toy.user_max_power(0));
    alloc.lambda = Eigen::VectorXd::Zero(1);
    alloc.mu = Eigen::VectorXd::Zero(1);
    Rng rng(derive_seed(s, kTagRandomCoefficient));
    const CVector init = random_coefficient(real.num_elements, rng);
    const ScaResult sca = sca_penalty_loop(build_lifted_problem(real, alloc, toy), init, params.sca);
    const double solver = evaluate_objective(alloc, sca.coefficient, real, toy);
    const double oracle = brute_force_phase(real, alloc, toy, OracleGrid{16, 32}).objective;
    const double ratio = solver / oracle;
    phase_worst = std::min(phase_worst, ratio);
    if (solver >= 0.95 * oracle) ++phase_ok;
  }
  const bool phase_pass = phase_ok == instances;
  all = all && phase_pass;
  line(std::string(phase_pass ? "PASS" : "FAIL") + " ris-vs-phase-grid K=1 N=1 M=2: " + std::to_string(phase_ok) + "/" +
       std::to_string(instances) + " within 5%, worst ratio " + format_double(phase_worst));
  return all;
}

void write_solution_bundle(const std::string& dir, const SystemConfig& cfg, const ChannelRealization& real,
                           const AoResult& result) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  const Solution& sol = result.solution;
  const AoReport& rep = result.report;
  {
    auto out = open_out(base / "config.cfg");
    write_config(cfg, out);
  }
  {
    auto out = open_out(base / "allocation.csv");
    out << "k,n,assigned,power_W,rate_bps\n";
    for (int k = 0; k < real.num_users; ++k)
      for (int n = 0; n < real.num_subcarriers; ++n) {
        const bool a = sol.allocation.assigned(k, n);
        const double p = sol.allocation.power(k, n);
        const double rate = a ? snr_and_rate(p, real.cascaded(k, n), sol.coefficient, real.gap[static_cast<std::size_t>(k)], cfg).rate : 0.0;
        out << k << ',' << n << ',' << (a ? 1 : 0) << ',' << format_double(p) << ',' << format_double(rate) << '\n';
      }
  }
  {
    auto out = open_out(base / "coefficient.csv");
    out << "m,re_c,im_c,magnitude\n";
    for (Eigen::Index m = 0; m < sol.coefficient.size(); ++m)
      out << m << ',' << format_double(sol.coefficient[m].real()) << ',' << format_double(sol.coefficient[m].imag()) << ','
          << format_double(std::abs(sol.coefficient[m])) << '\n';
  }
  {
    auto out = open_out(base / "trace.csv");
    out << "iteration,sum_rate_bps\n";
    for (std::size_t t = 0; t < rep.trace.size(); ++t) out << t << ',' << format_double(rep.trace[t]) << '\n';
  }
  {
    auto out = open_out(base / "dual_trace.csv");
    out << "ao_iteration,iter,k,lambda,mu,power_residual,rate_residual\n";
    for (std::size_t t = 0; t < rep.dual_reports.size(); ++t)
      for (const auto& r : rep.dual_reports[t].trace)
        out << t << ',' << r.iteration << ',' << r.user << ',' << format_double(r.lambda) << ',' << format_double(r.mu) << ','
            << format_double(r.power_residual) << ',' << format_double(r.rate_residual) << '\n';
  }
  {
    auto out = open_out(base / "sca_trace.csv");
    out << "ao_iteration,round,objective,rank_gap,xi,qos_min_slack\n";
    for (std::size_t t = 0; t < rep.sca_reports.size(); ++t)
      for (const auto& r : rep.sca_reports[t].trace)
        out << t + 1 << ',' << r.round << ',' << format_double(r.objective) << ',' << format_double(r.rank_gap) << ','
            << format_double(r.xi) << ',' << format_double(r.qos_min_slack) << '\n';
  }
  {
    nlohmann::ordered_json j;
    j["sum_rate_bps"] = sol.sum_rate;
    j["spectral_efficiency_bps_hz"] = sol.sum_rate / cfg.total_bandwidth;
    std::vector<double> rates(sol.user_rates.data(), sol.user_rates.data() + sol.user_rates.size());
    j["user_rates_bps"] = rates;
    j["iterations"] = rep.iterations;
    j["converged"] = rep.converged;
    j["infeasible"] = rep.infeasible;
    j["trace_bps"] = rep.trace;
    if (!rep.sca_reports.empty()) {
      j["final_rank_gap"] = rep.sca_reports.back().rank_gap;
      j["final_objective_ratio"] = rep.sca_reports.back().objective_ratio;
    }
    j["allocation_seconds"] = rep.allocation_seconds;
    j["ris_seconds"] = rep.ris_seconds;
    j["total_seconds"] = rep.total_seconds;
    auto out = open_out(base / "summary.json");
    out << j.dump(2) << '\n';
  }
}

int default_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace tris
