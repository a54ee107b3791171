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

// Acceptance suite. Prints one PASS/FAIL line per criterion; details follow
// on indented lines. Usage: tris_acceptance [--strict] [criterion ...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tris/aodriver.hpp"
#include "tris/channel.hpp"
#include "tris/error.hpp"
#include "tris/harness.hpp"
#include "tris/oracle.hpp"
#include "tris/rissolver.hpp"

#ifndef TRIS_CLI_PATH
#define TRIS_CLI_PATH "tris"
#endif
#ifndef TRIS_CONFIG_DIR
#define TRIS_CONFIG_DIR "configs"
#endif
#ifndef TRIS_WORK_DIR
#define TRIS_WORK_DIR "."
#endif

using namespace tris;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

struct Verdict {
  int id;
  bool pass;
  std::string title;
  std::vector<std::string> details;
};

void report(const Verdict& v) {
  std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << v.id << ": " << v.title << '\n';
  for (const auto& d : v.details) std::cout << "    " << d << '\n';
  std::cout.flush();
}

// Default-config AO runs shared by criteria 1, 3, 4 and 5.
struct DefaultRun {
  std::uint64_t seed = 0;
  ChannelRealization real;
  AoResult result;
};

const std::vector<DefaultRun>& default_runs() {
  static const std::vector<DefaultRun> runs = [] {
    std::vector<DefaultRun> out;
    const SystemConfig cfg;
    for (int i = 0; i < 50; ++i) {
      DefaultRun r;
      r.seed = derive_seed(20261015, static_cast<std::uint64_t>(i));
      r.real = generate_channel(cfg, r.seed);
      r.result = alternate(r.real, cfg, AoParams{});
      out.push_back(std::move(r));
    }
    return out;
  }();
  return runs;
}

Verdict criterion1() {
  Verdict v{1, true, "AO objective is non-decreasing on 50 default-config runs", {}};
  const auto t0 = Clock::now();
  const auto& runs = default_runs();
  int bad_pairs = 0, pairs = 0;
  double worst_drop = 0.0, slowest = 0.0, total = 0.0;
  int max_iter = 0;
  for (const auto& r : runs) {
    const auto& t = r.result.report.trace;
    for (std::size_t i = 1; i < t.size(); ++i) {
      ++pairs;
      const double drop = (t[i - 1] - t[i]) / std::abs(t[i - 1]);
      worst_drop = std::max(worst_drop, drop);
      if (t[i] < t[i - 1] - 1e-6 * std::abs(t[i - 1])) ++bad_pairs;
    }
    slowest = std::max(slowest, r.result.report.total_seconds);
    total += r.result.report.total_seconds;
    max_iter = std::max(max_iter, r.result.report.iterations);
  }
  v.pass = bad_pairs == 0 && slowest < 60.0 && runs.size() == 50;
  v.details.push_back(std::to_string(pairs) + " consecutive pairs, " + std::to_string(bad_pairs) +
                      " violations, largest relative drop " + num(worst_drop));
  v.details.push_back("per-run time: mean " + num(total / runs.size()) + " s, max " + num(slowest) +
                      " s (limit 60 s); max AO iterations " + std::to_string(max_iter) + "; wall " +
                      num(since(t0)) + " s");
  return v;
}

Verdict criterion2() {
  Verdict v{2, true, "dual allocation within 2% of exhaustive search (K=2, N=2, 100 instances)", {}};
  SystemConfig cfg;
  cfg.num_users = 2;
  cfg.num_subcarriers = 2;
  cfg.ris_rows = cfg.ris_cols = 2;
  cfg.min_rate = {0.0};
  cfg.antenna_offset = 0.02;
  int ok = 0, refined_ok = 0;
  double worst = 1e300, dual_time = 0.0;
  const auto t0 = Clock::now();
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t s = derive_seed(2, static_cast<std::uint64_t>(i));
    const ChannelRealization real = generate_channel(cfg, s);
    Rng rng(derive_seed(s, 99));
    const GammaTable gamma = gamma_table(real, random_coefficient(4, rng), cfg);
    const auto d0 = Clock::now();
    const AllocationResult ar = solve_allocation(gamma, cfg, DualSolveParams{});
    dual_time += since(d0);
    const double coarse = brute_force_allocation(gamma, cfg, OracleGrid{16, 16}).objective;
    const double fine = brute_force_allocation(gamma, cfg, OracleGrid{61, 16}).objective;
    if (ar.report.sum_rate >= 0.98 * coarse) ++ok;
    if (ar.report.sum_rate >= 0.98 * fine) ++refined_ok;
    worst = std::min(worst, ar.report.sum_rate / std::max(coarse, fine));
  }
  const double wall = since(t0);
  v.pass = ok == 100 && refined_ok == 100 && wall < 5.0;
  v.details.push_back("16-point grid: " + std::to_string(ok) + "/100, 61-point grid: " + std::to_string(refined_ok) +
                      "/100, worst ratio " + num(worst, 8));
  v.details.push_back("total " + num(wall) + " s (limit 5 s), of which dual solver " + num(dual_time) + " s");
  return v;
}

Verdict criterion3() {
  Verdict v{3, true, "KKT residuals at convergence on the criterion-1 runs", {}};
  const SystemConfig cfg;
  int checked = 0, slack_bad = 0, budget_bad = 0;
  double worst_slack = 0.0, worst_excess = 0.0;
  for (const auto& r : default_runs()) {
    if (!r.result.report.converged) continue;
    ++checked;
    const AllocationState& a = r.result.solution.allocation;
    for (int k = 0; k < cfg.num_users; ++k) {
      const double pmax = cfg.user_max_power(k);
      const double used = a.user_power(k);
      const double lam = a.lambda[k];
      const double slack = std::abs(lam * (pmax - used));
      if (lam > 0.0) worst_slack = std::max(worst_slack, slack / (lam * pmax));
      if (slack > 1e-4 * lam * pmax) ++slack_bad;
      worst_excess = std::max(worst_excess, (used - pmax) / pmax);
      if (used > pmax * (1 + 1e-6)) ++budget_bad;
    }
  }
  v.pass = checked > 0 && slack_bad == 0 && budget_bad == 0;
  v.details.push_back(std::to_string(checked) + " converged runs; complementary slackness violations " +
                      std::to_string(slack_bad) + " (worst relative " + num(worst_slack) + "), budget violations " +
                      std::to_string(budget_bad) + " (worst relative excess " + num(worst_excess) + ")");
  return v;
}

Verdict criterion4() {
  Verdict v{4, true, "water-filling level set on active subcarriers", {}};
  const SystemConfig cfg;
  int users = 0, bad = 0;
  double worst = 0.0;
  for (const auto& r : default_runs()) {
    if (!r.result.report.converged) continue;
    const Solution& s = r.result.solution;
    const GammaTable gamma = gamma_table(r.real, s.coefficient, cfg);
    for (int k = 0; k < cfg.num_users; ++k) {
      std::vector<double> levels;
      for (int n = 0; n < cfg.num_subcarriers; ++n)
        if (s.allocation.assigned(k, n) && s.allocation.power(k, n) > 0.0)
          levels.push_back(s.allocation.power(k, n) + 1.0 / gamma(k, n));
      if (levels.empty()) continue;
      ++users;
      double mean = 0.0;
      for (double l : levels) mean += l;
      mean /= static_cast<double>(levels.size());
      double var = 0.0;
      for (double l : levels) var += (l - mean) * (l - mean);
      const double sd = std::sqrt(var / static_cast<double>(levels.size()));
      worst = std::max(worst, sd / mean);
      if (sd > 1e-6 * mean) ++bad;
    }
  }
  v.pass = users > 0 && bad == 0;
  v.details.push_back(std::to_string(users) + " users checked, " + std::to_string(bad) +
                      " above 1e-6, worst sd/mean " + num(worst));
  return v;
}

Verdict criterion5() {
  Verdict v{5, true, "rank-one penalty success on default-config runs", {}};
  int total = 0, gap_ok = 0, ratio_ok = 0;
  double worst_gap = 0.0, worst_ratio = 1e300;
  for (const auto& r : default_runs()) {
    const auto& reps = r.result.report.sca_reports;
    if (reps.empty()) continue;
    ++total;
    const ScaReport& s = reps.back();
    worst_gap = std::max(worst_gap, s.rank_gap);
    if (s.rank_gap <= 1e-3) {
      ++gap_ok;
      worst_ratio = std::min(worst_ratio, s.objective_ratio);
      if (s.objective_ratio >= 0.99) ++ratio_ok;
    }
  }
  v.pass = total > 0 && gap_ok >= 0.9 * total && ratio_ok == gap_ok;
  v.details.push_back("rank gap <= 1e-3 on " + std::to_string(gap_ok) + "/" + std::to_string(total) +
                      " runs (worst " + num(worst_gap) + "); extracted/lifted >= 0.99 on " + std::to_string(ratio_ok) +
                      "/" + std::to_string(gap_ok) + " (worst " + num(worst_ratio, 8) + ")");
  return v;
}

Verdict criterion6() {
  Verdict v{6, true, "SCA minorization on 1000 random PSD pairs (M=4)", {}};
  Rng rng(6);
  auto psd = [&] {
    CMatrix x(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) x(i, j) = complex_gaussian(rng);
    // mix in low-rank and degenerate spectra
    const int rank = 1 + static_cast<int>(rng() % 4);
    return CMatrix(x.leftCols(rank) * x.leftCols(rank).adjoint());
  };
  int above = 0, not_tight = 0;
  double worst_excess = -1e300, worst_tight = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const CMatrix c = psd(), ct = psd();
    const double norm_c = Eigen::SelfAdjointEigenSolver<CMatrix>(c).eigenvalues().maxCoeff();
    const double norm_ct = Eigen::SelfAdjointEigenSolver<CMatrix>(ct).eigenvalues().maxCoeff();
    const double excess = sca_lower_bound(c, ct) - norm_c;
    worst_excess = std::max(worst_excess, excess);
    if (excess > 1e-9) ++above;
    const double tight = std::abs(sca_lower_bound(ct, ct) - norm_ct);
    worst_tight = std::max(worst_tight, tight);
    if (tight > 1e-9) ++not_tight;
  }
  v.pass = above == 0 && not_tight == 0;
  v.details.push_back("bound above the norm: " + std::to_string(above) + " (max excess " + num(worst_excess) +
                      "); not tight at the expansion point: " + std::to_string(not_tight) + " (max " +
                      num(worst_tight) + ")");
  return v;
}

Verdict criterion7() {
  Verdict v{7, true, "RIS solver within 5% of the 32-point phase grid (K=1, N=1, M=2, 50 toys)", {}};
  SystemConfig cfg;
  cfg.num_users = 1;
  cfg.num_subcarriers = 1;
  cfg.ris_rows = 2;
  cfg.ris_cols = 1;
  cfg.antenna_offset = 0.02;
  int ok = 0;
  double worst = 1e300;
  for (int i = 0; i < 50; ++i) {
    const std::uint64_t s = derive_seed(7, static_cast<std::uint64_t>(i));
    const ChannelRealization real = generate_channel(cfg, s);
    AllocationState alloc;
    alloc.owner = {0};
    alloc.power = RMatrix::Constant(1, 1, cfg.user_max_power(0));
    alloc.lambda = alloc.mu = Eigen::VectorXd::Zero(1);
    Rng rng(derive_seed(s, 1));
    const CVector init = random_coefficient(2, rng);
    const ScaResult sca = sca_penalty_loop(build_lifted_problem(real, alloc, cfg), init, ScaParams{});
    const double solver = evaluate_objective(alloc, sca.coefficient, real, cfg);
    const double oracle = brute_force_phase(real, alloc, cfg, OracleGrid{16, 32}).objective;
    worst = std::min(worst, solver / oracle);
    if (solver >= 0.95 * oracle) ++ok;
  }
  v.pass = ok == 50;
  v.details.push_back(std::to_string(ok) + "/50 within 5% (random starts), worst ratio " + num(worst, 8));
  return v;
}

struct Sweep {
  std::string file;
  std::string label;
};

// Per-trial differences a - b on the shared realizations. Informational only;
// the pass rule uses the pooled standard error.
struct Paired {
  double se = 0.0;
  int ahead = 0;
  int n = 0;
};

Paired summarize(const std::vector<double>& diffs) {
  Paired p;
  p.n = static_cast<int>(diffs.size());
  if (p.n < 2) return p;
  double mean = 0.0;
  for (double d : diffs) mean += d;
  mean /= p.n;
  double var = 0.0;
  for (double d : diffs) {
    var += (d - mean) * (d - mean);
    if (d > 0.0) ++p.ahead;
  }
  p.se = std::sqrt(var / (p.n - 1) / p.n);
  return p;
}

Paired paired(const std::vector<TrialRow>& rows, double value, Algorithm a, Algorithm b) {
  std::map<int, double> ra, rb;
  for (const auto& r : rows) {
    if (r.sweep_value != value || !r.feasible) continue;
    if (r.algorithm == a) ra[r.trial] = r.sum_rate;
    if (r.algorithm == b) rb[r.trial] = r.sum_rate;
  }
  std::vector<double> diffs;
  for (const auto& [t, x] : ra)
    if (rb.count(t)) diffs.push_back(x - rb[t]);
  return summarize(diffs);
}

Paired paired_points(const std::vector<TrialRow>& rows, double hi, double lo) {
  std::map<int, double> rh, rl;
  for (const auto& r : rows) {
    if (r.algorithm != Algorithm::proposed || !r.feasible) continue;
    if (r.sweep_value == hi) rh[r.trial] = r.sum_rate;
    if (r.sweep_value == lo) rl[r.trial] = r.sum_rate;
  }
  std::vector<double> diffs;
  for (const auto& [t, x] : rh)
    if (rl.count(t)) diffs.push_back(x - rl[t]);
  return summarize(diffs);
}

Verdict criterion8(bool quick) {
  Verdict v{8, true, "trend reproduction with 100 paired trials per point", {}};
  const std::vector<Sweep> sweeps = {{"power_sweep.spec", "p_max"},
                                     {"subcarrier_sweep.spec", "N"},
                                     {"user_sweep.spec", "K"},
                                     {"element_sweep.spec", "M"}};
  const fs::path out_root = fs::path(TRIS_WORK_DIR) / "acceptance_sweeps";
  for (const auto& sw : sweeps) {
    ExperimentSpec spec = load_spec((fs::path(TRIS_CONFIG_DIR) / sw.file).string());
    if (quick) spec.trials = 4;
    const auto t0 = Clock::now();
    const BenchmarkResult res = run_benchmark(spec, spec.seed.value_or(7), AoParams{}, default_threads());
    write_benchmark(res, spec, (out_root / fs::path(sw.file).stem()).string());
    std::map<std::pair<double, Algorithm>, AggregateRow> table;
    for (const auto& a : res.aggregates) table[{a.sweep_value, a.algorithm}] = a;
    auto pooled = [](const AggregateRow& a, const AggregateRow& b) {
      return std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_);
    };
    bool trend = true, beats = true;
    std::string trend_text, beat_text;
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
      const AggregateRow& p = table.at({spec.values[i], Algorithm::proposed});
      trend_text += (i ? " -> " : "") + num(p.mean / 1e6, 6);
      if (i > 0) {
        const AggregateRow& q = table.at({spec.values[i - 1], Algorithm::proposed});
        const double diff = p.mean - q.mean, se = pooled(p, q);
        if (!(diff >= se)) {
          trend = false;
          const Paired pd = paired_points(res.trials, spec.values[i], spec.values[i - 1]);
          v.details.push_back("  " + sw.label + " " + num(spec.values[i - 1]) + " -> " + num(spec.values[i]) +
                              ": increase " + num(diff / 1e6) + " Mbit/s < pooled SE " + num(se / 1e6) +
                              " Mbit/s (paired: SE " + num(pd.se / 1e6) + " Mbit/s, higher on " +
                              std::to_string(pd.ahead) + "/" + std::to_string(pd.n) + " trials)");
        }
      }
      for (Algorithm b : {Algorithm::three_stage, Algorithm::random_coefficient, Algorithm::random_allocation}) {
        const AggregateRow& r = table.at({spec.values[i], b});
        const double diff = p.mean - r.mean, se = pooled(p, r);
        if (!(diff >= se)) {
          beats = false;
          const Paired pd = paired(res.trials, spec.values[i], Algorithm::proposed, b);
          v.details.push_back("  " + sw.label + "=" + num(spec.values[i]) + ": proposed - " + algorithm_name(b) + " = " +
                              num(diff / 1e6) + " Mbit/s < pooled SE " + num(se / 1e6) + " Mbit/s (paired: SE " +
                              num(pd.se / 1e6) + " Mbit/s, ahead on " + std::to_string(pd.ahead) + "/" +
                              std::to_string(pd.n) + " trials)");
        }
      }
    }
    v.pass = v.pass && trend && beats;
    v.details.push_back(std::string(trend && beats ? "ok  " : "bad ") + sw.label + " sweep (" +
                        std::to_string(spec.trials) + " trials, " + num(since(t0)) + " s): proposed mean Mbit/s " +
                        trend_text + "; (a) " + (trend ? "yes" : "no") + ", (b) " + (beats ? "yes" : "no"));
  }
  v.details.push_back("sweep outputs in " + out_root.string());
  return v;
}

Verdict criterion9() {
  Verdict v{9, true, "near/far classification of the default geometry", {}};
  const SystemConfig cfg;
  const double rayleigh = rayleigh_distance(array_aperture(cfg), cfg.wavelength());
  bool ok = std::abs(rayleigh - 1.60) <= 0.005 && cfg.antenna_offset < rayleigh;
  double min_distance = 1e300;
  for (int i = 0; i < 1000; ++i) {
    const ChannelRealization real = generate_channel(cfg, derive_seed(9, static_cast<std::uint64_t>(i)));
    for (double d : real.user_distance) min_distance = std::min(min_distance, d);
  }
  ok = ok && min_distance >= 15.0 && min_distance > rayleigh;

  // routing: each model refuses the other's regime
  bool far_rejects = false, near_rejects = false;
  Rng rng(1);
  try {
    far_field_channel(CVector::Ones(cfg.num_elements()), 0.5 * rayleigh, 0, cfg, rng);
  } catch (const Error& e) {
    far_rejects = e.code() == ErrorCode::geometry;
  }
  SystemConfig far_antenna = cfg;
  far_antenna.antenna_offset = 2.0 * rayleigh;
  try {
    generate_channel(far_antenna, 1);
  } catch (const Error& e) {
    near_rejects = e.code() == ErrorCode::geometry;
  }
  v.pass = ok && far_rejects && near_rejects;
  v.details.push_back("Rayleigh distance " + num(rayleigh, 6) + " m, antenna offset " + num(cfg.antenna_offset) +
                      " m, closest of 5000 sampled users " + num(min_distance, 6) + " m");
  v.details.push_back(std::string("far-field model rejects a user inside the boundary: ") +
                      (far_rejects ? "yes" : "no") + "; near-field model rejects an antenna beyond it: " +
                      (near_rejects ? "yes" : "no"));
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict criterion10() {
  Verdict v{10, true, "benchmark --seed 7 is byte-for-byte repeatable", {}};
  const fs::path root = fs::path(TRIS_WORK_DIR) / "acceptance_determinism";
  fs::remove_all(root);
  const std::string spec = (fs::path(TRIS_CONFIG_DIR) / "quick.spec").string();
  std::vector<std::string> texts;
  int i = 0;
  for (const char* threads : {"1", "3"}) {
    const fs::path out = root / ("run" + std::to_string(i++));
    const std::string cmd = std::string("\"") + TRIS_CLI_PATH + "\" benchmark --spec \"" + spec +
                            "\" --seed 7 --quiet --threads " + threads + " --out \"" + out.string() + "\"";
    const int rc = std::system(cmd.c_str());
    if (rc != 0) {
      v.pass = false;
      v.details.push_back("command failed (" + std::to_string(rc) + "): " + cmd);
      return v;
    }
    texts.push_back(slurp(out / "aggregate.csv"));
  }
  v.pass = !texts[0].empty() && texts[0] == texts[1];
  v.details.push_back("aggregate.csv " + std::to_string(texts[0].size()) + " bytes; runs with 1 and 3 threads " +
                      (v.pass ? "identical" : "differ"));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false, quick = false;
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--strict") {
      strict = true;
    } else if (a == "--quick") {
      quick = true;  // fewer trials in criterion 8, for development only
    } else {
      try {
        selected.insert(std::stoi(a));
      } catch (...) {
        std::cerr << "usage: tris_acceptance [--strict] [--quick] [criterion ...]\n";
        return 2;
      }
    }
  }
  auto want = [&](int id) { return selected.empty() || selected.count(id) > 0; };
  const auto t0 = Clock::now();
  int failed = 0, run = 0;
  auto go = [&](int id, auto fn) {
    if (!want(id)) return;
    Verdict v{id, false, "", {}};
    try {
      v = fn();
    } catch (const std::exception& e) {
      v.pass = false;
      v.title = "aborted";
      v.details.push_back(std::string("exception: ") + e.what());
    }
    ++run;
    if (!v.pass) ++failed;
    report(v);
  };
  go(9, criterion9);
  go(6, criterion6);
  go(2, criterion2);
  go(7, criterion7);
  go(1, criterion1);
  go(3, criterion3);
  go(4, criterion4);
  go(5, criterion5);
  go(10, criterion10);
  go(8, [&] { return criterion8(quick); });
  std::cout << "acceptance: " << run - failed << "/" << run << " criteria passed in " << num(since(t0)) << " s\n";
  return strict && failed > 0 ? 1 : 0;
}
