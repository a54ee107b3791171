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

#include <vector>

#include "tris/channel.hpp"
#include "tris/config.hpp"
#include "tris/dualalloc.hpp"
#include "tris/psd_program.hpp"

namespace tris {

// tr(C) - sigma_1(C). Rejects matrices that are not Hermitian to 1e-10
// relative.
double penalty_term(const CMatrix& c);

struct TopEigen {
  double value = 0.0;
  CVector vector;  // unit norm, first non-negligible entry real positive
};

// Largest eigenpair. When the top eigenvalue is degenerate (sigma_1 - sigma_2
// < 1e-9 sigma_1) the vector is the normalized projection of the first unit
// basis vector with a non-negligible component in the top eigenspace.
TopEigen top_eigen(const CMatrix& c);

// sigma_1(C_t) + Re tr(u u^H (C - C_t)), u the top eigenvector of C_t.
double sca_lower_bound(const CMatrix& c, const CMatrix& expansion);

// p_{k,n} nu_k / (N_0 W) on owned pairs, zero elsewhere.
RMatrix xi_table(const ChannelRealization& real, const AllocationState& alloc, const SystemConfig& cfg);

// The rate objective for fixed allocation, lifted to C = c c^H and scaled by
// 1/W: sum over owned pairs of log2(1 + Xi tr(C V)), one group per user with
// floor r_min / W.
struct LiftedProblem {
  ConcaveProgram program;
  double bandwidth = 0.0;
  int num_users = 0;

  double rate(const CMatrix& c) const { return bandwidth * program.objective(c); }  // bit/s
  double rate(const CVector& c) const;
  std::vector<double> user_rates(const CMatrix& c) const;  // bit/s
  std::vector<double> user_floors() const;                 // bit/s
};

LiftedProblem build_lifted_problem(const ChannelRealization& real, const AllocationState& alloc,
                                   const SystemConfig& cfg);

struct ScaParams {
  double initial_xi = -1.0;  // negative: 0.1 * objective(C0) / tr(C0)
  double xi_growth = 5.0;
  double tolerance = 3e-5;   // relative objective change per round
  double gap_target = 1e-4;  // (tr C - sigma_1) / tr C
  int max_rounds = 40;
  BarrierParams inner;
};

struct ScaRow {
  int round = 0;
  double objective = 0.0;  // penalized objective, bit/s
  double rank_gap = 0.0;
  double xi = 0.0;         // bit/s per unit trace
  double qos_min_slack = 0.0;  // min_k rate_k - r_min, bit/s
};

struct ScaReport {
  std::vector<ScaRow> trace;
  bool converged = false;
  bool gap_met = false;
  bool infeasible = false;
  bool certified = false;
  bool inner_failures = false;
  int rounds = 0;
  int newton_steps = 0;
  double rank_gap = 0.0;
  double lifted_rate = 0.0;   // bit/s at C
  double extracted_rate = 0.0;  // bit/s at the extracted coefficient
  double objective_ratio = 0.0;
  double seconds = 0.0;
};

struct ScaResult {
  CMatrix lifted;
  CVector coefficient;
  ScaReport report;
};

// Solves the penalized convex subproblem at expansion point C_t.
BarrierResult solve_subproblem(const LiftedProblem& problem, const CMatrix& expansion, double xi,
                               const BarrierParams& params);

// Penalized SCA iteration started from c_init c_init^H. Only improving
// iterates are accepted, so the objective trace is non-decreasing for a
// fixed penalty weight.
ScaResult sca_penalty_loop(const LiftedProblem& problem, const CVector& c_init, const ScaParams& params);

// sqrt(sigma_1) times the top eigenvector, entries clipped to unit modulus.
CVector extract_coefficient(const CMatrix& c);

// c_m = v_m / |v_m| for the pair with the largest cascaded norm.
CVector phase_aligned_init(const ChannelRealization& real);

}  // namespace tris
