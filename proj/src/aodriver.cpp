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

#include "tris/aodriver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "tris/error.hpp"

namespace tris {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool meets_qos(const AllocationState& alloc, const CVector& c, const ChannelRealization& real,
               const SystemConfig& cfg, double tol) {
  ObjectiveDiagnostics diag;
  evaluate_objective(alloc, c, real, cfg, &diag);
  for (int k = 0; k < real.num_users; ++k)
    if (diag.user_rates[k] < cfg.user_min_rate(k) * (1.0 - tol)) return false;
  return true;
}

Solution make_solution(const AllocationState& alloc, const CVector& c, const ChannelRealization& real,
                       const SystemConfig& cfg) {
  Solution s;
  s.allocation = alloc;
  s.coefficient = c;
  s.lifted = c * c.adjoint();
  ObjectiveDiagnostics diag;
  s.sum_rate = evaluate_objective(alloc, c, real, cfg, &diag);
  s.user_rates = diag.user_rates;
  return s;
}

struct RisStage {
  CVector coefficient;
  bool accepted = false;
};

RisStage ris_stage(const ChannelRealization& real, const SystemConfig& cfg, const AoParams& params,
                   const AllocationState& alloc, const CVector& c, double current, AoReport& rep) {
  const auto t0 = Clock::now();
  const LiftedProblem problem = build_lifted_problem(real, alloc, cfg);
  ScaResult sca = sca_penalty_loop(problem, c, params.sca);
  RisStage out{c, false};
  if (!sca.report.infeasible) {
    const double candidate = evaluate_objective(alloc, sca.coefficient, real, cfg);
    if (candidate >= current && meets_qos(alloc, sca.coefficient, real, cfg, params.qos_tolerance)) {
      out.coefficient = sca.coefficient;
      out.accepted = true;
    }
  }
  rep.sca_reports.push_back(std::move(sca.report));
  rep.coefficient_accepted.push_back(out.accepted);
  rep.ris_seconds += seconds_since(t0);
  return out;
}

}  // namespace

double evaluate_objective(const AllocationState& alloc, const CVector& coefficient, const ChannelRealization& real,
                          const SystemConfig& cfg, ObjectiveDiagnostics* diag) {
  const int K = real.num_users;
  const int N = real.num_subcarriers;
  if (static_cast<int>(alloc.owner.size()) != N || alloc.power.rows() != K || alloc.power.cols() != N)
    fail(ErrorCode::invalid_argument, "allocation shape does not match the channel");
  if (coefficient.size() != real.num_elements) fail(ErrorCode::invalid_argument, "coefficient has the wrong length");

  Eigen::VectorXd rates = Eigen::VectorXd::Zero(K);
  for (int n = 0; n < N; ++n) {
    const int k = alloc.owner[static_cast<std::size_t>(n)];
    if (k < -1 || k >= K) fail(ErrorCode::invalid_argument, "subcarrier owner out of range");
    if (k < 0) continue;
    rates[k] += snr_and_rate(alloc.power(k, n), real.cascaded(k, n), coefficient, real.gap[static_cast<std::size_t>(k)], cfg).rate;
  }
  if (diag != nullptr) {
    diag->user_rates = rates;
    diag->issues.clear();
    diag->max_power_excess = 0.0;
    diag->min_qos_slack = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      double used = 0.0;
      for (int n = 0; n < N; ++n) {
        const double p = alloc.power(k, n);
        if (p < 0.0) diag->issues.push_back("negative power for user " + std::to_string(k));
        if (p != 0.0 && alloc.owner[static_cast<std::size_t>(n)] != k)
          diag->issues.push_back("power on unowned subcarrier " + std::to_string(n) + " for user " + std::to_string(k));
        if (alloc.owner[static_cast<std::size_t>(n)] == k) used += p;
      }
      const double excess = (used - cfg.user_max_power(k)) / cfg.user_max_power(k);
      diag->max_power_excess = std::max(diag->max_power_excess, excess);
      if (excess > 1e-9) diag->issues.push_back("power budget exceeded for user " + std::to_string(k));
      const double slack = rates[k] - cfg.user_min_rate(k);
      diag->min_qos_slack = std::min(diag->min_qos_slack, slack);
      if (slack < 0.0) diag->issues.push_back("rate floor missed for user " + std::to_string(k));
    }
    diag->max_modulus = coefficient.size() ? coefficient.cwiseAbs().maxCoeff() : 0.0;
    if (diag->max_modulus > 1.0 + 1e-12) diag->issues.push_back("coefficient modulus above one");
  }
  return rates.sum();
}

AoResult alternate(const ChannelRealization& real, const SystemConfig& cfg, const AoParams& params) {
  return alternate(real, cfg, params, phase_aligned_init(real));
}

AoResult alternate(const ChannelRealization& real, const SystemConfig& cfg, const AoParams& params,
                   const CVector& c0) {
  const auto t0 = Clock::now();
  AoResult res;
  AoReport& rep = res.report;

  auto alloc_start = Clock::now();
  AllocationResult ar = solve_allocation(gamma_table(real, c0, cfg), cfg, params.dual);
  rep.allocation_seconds += seconds_since(alloc_start);
  const bool infeasible0 = ar.report.infeasible;
  rep.dual_reports.push_back(ar.report);
  AllocationState alloc = std::move(ar.state);
  CVector c = c0;
  double current = evaluate_objective(alloc, c, real, cfg);
  rep.trace.push_back(current);
  res.solution = make_solution(alloc, c, real, cfg);
  if (infeasible0) {
    rep.infeasible = true;
    rep.total_seconds = seconds_since(t0);
    return res;
  }

  for (int t = 1; t <= params.max_iterations; ++t) {
    const RisStage ris = ris_stage(real, cfg, params, alloc, c, current, rep);
    c = ris.coefficient;

    alloc_start = Clock::now();
    AllocationResult next = solve_allocation(gamma_table(real, c, cfg), cfg, params.dual, &alloc.owner);
    rep.allocation_seconds += seconds_since(alloc_start);
    rep.dual_reports.push_back(next.report);
    if (!next.report.infeasible) alloc = std::move(next.state);

    const double value = evaluate_objective(alloc, c, real, cfg);
    rep.trace.push_back(value);
    rep.iterations = t;
    if (value > res.solution.sum_rate) res.solution = make_solution(alloc, c, real, cfg);
    const bool small = std::abs(value - current) <= params.tolerance * std::max(std::abs(current), 1e-300);
    current = value;
    if (small) {
      rep.converged = true;
      break;
    }
  }
  rep.total_seconds = seconds_since(t0);
  return res;
}

AoResult three_stage(const ChannelRealization& real, const SystemConfig& cfg, const AoParams& params) {
  const auto t0 = Clock::now();
  AoResult res;
  AoReport& rep = res.report;
  const CVector c0 = phase_aligned_init(real);
  const auto alloc_start = Clock::now();
  AllocationResult ar = solve_allocation(gamma_table(real, c0, cfg), cfg, params.dual);
  rep.allocation_seconds += seconds_since(alloc_start);
  rep.dual_reports.push_back(ar.report);
  const double first = evaluate_objective(ar.state, c0, real, cfg);
  rep.trace.push_back(first);
  if (ar.report.infeasible) {
    rep.infeasible = true;
    res.solution = make_solution(ar.state, c0, real, cfg);
    rep.total_seconds = seconds_since(t0);
    return res;
  }
  const RisStage ris = ris_stage(real, cfg, params, ar.state, c0, first, rep);
  res.solution = make_solution(ar.state, ris.coefficient, real, cfg);
  rep.trace.push_back(res.solution.sum_rate);
  rep.iterations = 1;
  rep.converged = true;
  rep.total_seconds = seconds_since(t0);
  return res;
}

}  // namespace tris
