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

#include "tris/rissolver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "tris/error.hpp"

namespace tris {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void require_hermitian(const CMatrix& c) {
  if (c.rows() != c.cols()) fail(ErrorCode::invalid_argument, "matrix is not square");
  const double scale = std::max(c.norm(), std::numeric_limits<double>::min());
  if ((c - c.adjoint()).norm() > 1e-10 * scale) fail(ErrorCode::invalid_argument, "matrix is not Hermitian");
}

double rank_gap(const CMatrix& c) {
  const double tr = c.trace().real();
  return tr > 0.0 ? std::max(0.0, penalty_term(c)) / tr : 0.0;
}

}  // namespace

double penalty_term(const CMatrix& c) {
  require_hermitian(c);
  if (c.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(c, Eigen::EigenvaluesOnly);
  return std::max(0.0, c.trace().real() - eig.eigenvalues().maxCoeff());
}

TopEigen top_eigen(const CMatrix& c) {
  require_hermitian(c);
  const Eigen::Index m = c.rows();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(c);
  const Eigen::VectorXd& values = eig.eigenvalues();
  TopEigen top;
  top.value = values[m - 1];
  const double scale = std::abs(top.value);
  Eigen::Index first = m - 1;
  while (first > 0 && top.value - values[first - 1] < 1e-9 * scale) --first;
  const CMatrix basis = eig.eigenvectors().rightCols(m - first);
  if (basis.cols() == 1) {
    top.vector = basis.col(0);
  } else {
    for (Eigen::Index i = 0; i < m; ++i) {
      const CVector proj = basis * basis.row(i).adjoint();
      if (proj.norm() > 1e-6) {
        top.vector = proj.normalized();
        break;
      }
    }
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (std::abs(top.vector[i]) > 1e-12) {
      top.vector *= std::conj(top.vector[i]) / std::abs(top.vector[i]);
      break;
    }
  }
  return top;
}

double sca_lower_bound(const CMatrix& c, const CMatrix& expansion) {
  require_hermitian(c);
  const TopEigen top = top_eigen(expansion);
  return top.value + top.vector.dot((c - expansion) * top.vector).real();
}

RMatrix xi_table(const ChannelRealization& real, const AllocationState& alloc, const SystemConfig& cfg) {
  RMatrix xi = RMatrix::Zero(real.num_users, real.num_subcarriers);
  const double noise = cfg.noise_power();
  for (int n = 0; n < real.num_subcarriers; ++n) {
    const int k = alloc.owner[static_cast<std::size_t>(n)];
    if (k >= 0) xi(k, n) = alloc.power(k, n) * real.gap[static_cast<std::size_t>(k)] / noise;
  }
  return xi;
}

double LiftedProblem::rate(const CVector& c) const {
  double total = 0.0;
  for (const auto& t : program.terms) total += t.weight * std::log1p(t.gain * std::norm(t.direction.dot(c)));
  return bandwidth * total;
}

std::vector<double> LiftedProblem::user_rates(const CMatrix& c) const {
  std::vector<double> out = program.group_values(c);
  for (double& r : out) r *= bandwidth;
  return out;
}

std::vector<double> LiftedProblem::user_floors() const {
  std::vector<double> out = program.group_floor;
  for (double& r : out) r *= bandwidth;
  return out;
}

LiftedProblem build_lifted_problem(const ChannelRealization& real, const AllocationState& alloc,
                                   const SystemConfig& cfg) {
  LiftedProblem p;
  p.bandwidth = cfg.subcarrier_bandwidth();
  p.num_users = real.num_users;
  p.program.dim = real.num_elements;
  p.program.group_floor.resize(static_cast<std::size_t>(real.num_users));
  for (int k = 0; k < real.num_users; ++k) p.program.group_floor[static_cast<std::size_t>(k)] = cfg.user_min_rate(k) / p.bandwidth;
  const RMatrix xi = xi_table(real, alloc, cfg);
  for (int n = 0; n < real.num_subcarriers; ++n) {
    const int k = alloc.owner[static_cast<std::size_t>(n)];
    if (k < 0 || !(xi(k, n) > 0.0)) continue;
    const CVector& v = real.cascaded(k, n);
    if (!(v.squaredNorm() > 0.0)) continue;
    p.program.terms.push_back(LogTerm{k, 1.0 / kLn2, xi(k, n), v});
  }
  return p;
}

BarrierResult solve_subproblem(const LiftedProblem& problem, const CMatrix& expansion, double xi,
                               const BarrierParams& params) {
  ConcaveProgram program = problem.program;
  const int m = program.dim;
  const TopEigen top = top_eigen(expansion);
  program.linear = -(xi / problem.bandwidth) * (CMatrix::Identity(m, m) - top.vector * top.vector.adjoint());
  return maximize_concave(program, expansion, params);
}

CVector extract_coefficient(const CMatrix& c) {
  const TopEigen top = top_eigen(c);
  if (!(top.value > 0.0)) return CVector::Zero(c.rows());
  CVector out = std::sqrt(top.value) * top.vector;
  for (Eigen::Index i = 0; i < out.size(); ++i)
    if (std::abs(out[i]) > 1.0) out[i] /= std::abs(out[i]);
  return out;
}

CVector phase_aligned_init(const ChannelRealization& real) {
  const CVector* best = nullptr;
  double best_norm = -1.0;
  for (const auto& v : real.v) {
    const double n = v.squaredNorm();
    if (n > best_norm) {
      best_norm = n;
      best = &v;
    }
  }
  CVector c = CVector::Ones(real.num_elements);
  if (best == nullptr) return c;
  for (Eigen::Index m = 0; m < c.size(); ++m)
    if (std::abs((*best)[m]) > 0.0) c[m] = (*best)[m] / std::abs((*best)[m]);
  return c;
}

ScaResult sca_penalty_loop(const LiftedProblem& problem, const CVector& c_init, const ScaParams& params) {
  const auto start = std::chrono::steady_clock::now();
  const int m = problem.program.dim;
  if (c_init.size() != m) fail(ErrorCode::invalid_argument, "initial coefficient has the wrong length");
  ScaResult res;
  ScaReport& rep = res.report;

  CMatrix current = c_init * c_init.adjoint();
  const std::vector<double> floors = problem.user_floors();
  auto qos_slack = [&](const CMatrix& c) {
    const std::vector<double> rates = problem.user_rates(c);
    double slack = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < rates.size(); ++k) slack = std::min(slack, rates[k] - floors[k]);
    return slack;
  };
  auto penalized = [&](const CMatrix& c, double xi) { return problem.rate(c) - xi * penalty_term(c); };

  double xi = params.initial_xi;
  if (xi < 0.0) xi = 0.1 * problem.rate(current) / std::max(current.trace().real(), 1e-300);
  double value = penalized(current, xi);
  rep.trace.push_back(ScaRow{0, value, rank_gap(current), xi, qos_slack(current)});

  for (int round = 1; round <= params.max_rounds; ++round) {
    const BarrierResult sub = solve_subproblem(problem, current, xi, params.inner);
    rep.newton_steps += sub.newton_steps;
    rep.rounds = round;
    if (sub.infeasible) {
      rep.infeasible = true;
      rep.certified = sub.certified;
      break;
    }
    if (!sub.converged) rep.inner_failures = true;
    CMatrix next = 0.5 * (sub.solution + sub.solution.adjoint());
    const double next_value = penalized(next, xi);
    const double change = next_value - value;
    bool stalled = false;
    if (change >= 0.0) {
      current = std::move(next);
      value = next_value;
    } else {
      stalled = true;
    }
    const double gap = rank_gap(current);
    rep.trace.push_back(ScaRow{round, value, gap, xi, qos_slack(current)});
    const bool small = stalled || std::abs(change) <= params.tolerance * std::max(std::abs(value), 1.0);
    if (small && gap <= params.gap_target) {
      rep.converged = true;
      break;
    }
    if (small) {
      if (!(xi > 0.0)) {
        rep.converged = true;
        break;
      }
      xi *= params.xi_growth;
      value = penalized(current, xi);
    }
  }

  res.lifted = current;
  res.coefficient = extract_coefficient(current);
  rep.rank_gap = rank_gap(current);
  rep.gap_met = rep.rank_gap <= params.gap_target;
  rep.lifted_rate = problem.rate(current);
  rep.extracted_rate = problem.rate(res.coefficient);
  rep.objective_ratio = rep.lifted_rate > 0.0 ? rep.extracted_rate / rep.lifted_rate : 1.0;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace tris
