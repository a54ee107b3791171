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

#include <Eigen/Dense>

#include "tris/channel.hpp"
#include "tris/config.hpp"

namespace tris {

using RMatrix = Eigen::MatrixXd;

// Effective channel-to-noise ratio |v^H c|^2 nu_k / (N_0 W), K x N.
struct GammaTable {
  RMatrix values;
  int num_users() const { return static_cast<int>(values.rows()); }
  int num_subcarriers() const { return static_cast<int>(values.cols()); }
  double operator()(int k, int n) const { return values(k, n); }
};

GammaTable gamma_table(const ChannelRealization& real, const CVector& coefficient, const SystemConfig& cfg);

// Integer subcarrier assignment plus power. owner[n] is the user holding
// subcarrier n or -1; power(k, n) is zero wherever k does not own n.
struct AllocationState {
  std::vector<int> owner;
  RMatrix power;
  Eigen::VectorXd lambda;
  Eigen::VectorXd mu;
  int iteration = 0;

  bool assigned(int k, int n) const { return owner[static_cast<std::size_t>(n)] == k; }
  RMatrix assignment_matrix() const;
  double user_power(int k) const;
};

struct DualSolveParams {
  double power_step = 0.5;    // power-price step, in units of lambda0 / p_max
  double qos_step = 0.5;      // QoS-price step, in units of W / max(r_min / W, 1)
  double epsilon = 1e-4;      // relative multiplier change at exit
  int max_iterations = 600;
  double lambda_floor = 1e-12;
  double mu_ceiling = 1e6;    // on mu / W; above it the QoS floor is declared infeasible
};

// Water-filling level (W + mu) / (lambda ln 2) minus 1/Gamma, clipped at 0.
double power_step(double lambda, double mu, double gamma, double bandwidth);

// d L / d a at the optimal power; never negative.
double allocation_criterion(double power, double gamma, double bandwidth, double mu);

// Column-wise argmax of chi with ties to the lowest user; columns whose best
// value is not positive stay unassigned.
std::vector<int> assign_subcarriers(const RMatrix& chi);

struct MultiplierUpdate {
  Eigen::VectorXd lambda;
  Eigen::VectorXd mu;
  Eigen::VectorXd power_residual;  // p_max - sum_n a p
  Eigen::VectorXd rate_residual;   // sum_n a log2(1 + p Gamma) - r_min / W
};

// Projected subgradient step. power_steps and qos_steps are the already
// scheduled step sizes for this iteration.
MultiplierUpdate update_multipliers(const Eigen::VectorXd& lambda, const Eigen::VectorXd& mu,
                                    const std::vector<int>& owner, const RMatrix& power, const GammaTable& gamma,
                                    const SystemConfig& cfg, const Eigen::VectorXd& power_steps,
                                    const Eigen::VectorXd& qos_steps);

// Lagrange dual function at (lambda, mu), bit/s.
double dual_value(const Eigen::VectorXd& lambda, const Eigen::VectorXd& mu, const GammaTable& gamma,
                  const SystemConfig& cfg);

// Exact water-filling of one user's budget over the subcarriers it owns.
// Returns the water level, or 0 if the user has no usable subcarrier.
double water_fill(int user, const std::vector<int>& owner, const GammaTable& gamma, double budget,
                  RMatrix& power);

struct DualTraceRow {
  int iteration = 0;
  int user = 0;
  double lambda = 0.0;
  double mu = 0.0;
  double power_residual = 0.0;
  double rate_residual = 0.0;
};

struct DualReport {
  bool converged = false;
  bool infeasible = false;     // no QoS-feasible allocation was found
  bool mu_diverged = false;    // mu crossed the ceiling
  bool lambda_clamped = false; // lambda hit the floor at least once
  int iterations = 0;
  double sum_rate = 0.0;
  double best_dual = 0.0;      // smallest dual value seen, bit/s
  std::vector<double> dual_trace;       // best dual value after each iteration
  std::vector<DualTraceRow> trace;
  Eigen::VectorXd power_slackness;      // lambda_k (p_max - sum a p)
  Eigen::VectorXd rate_slackness;       // mu_k (rate_k - r_min) / W
  double seconds = 0.0;
};

struct AllocationResult {
  AllocationState state;
  DualReport report;
};

// Lagrangian dual decomposition for the joint power / subcarrier problem.
// The multipliers follow the projected subgradient iteration; every iterate's
// assignment is turned into a primal candidate by exact per-user water-filling
// and the best QoS-feasible candidate (optionally seeded with `incumbent`'s
// assignment) is returned.
AllocationResult solve_allocation(const GammaTable& gamma, const SystemConfig& cfg, const DualSolveParams& params,
                                  const std::vector<int>* incumbent = nullptr);

AllocationResult solve_allocation(const ChannelRealization& real, const CVector& coefficient,
                                  const SystemConfig& cfg, const DualSolveParams& params);

// Per-user rate W sum_n a log2(1 + p Gamma) in bit/s.
Eigen::VectorXd user_rates(const std::vector<int>& owner, const RMatrix& power, const GammaTable& gamma,
                           double bandwidth);

}  // namespace tris
