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

#include <string>
#include <vector>

#include "tris/channel.hpp"
#include "tris/config.hpp"
#include "tris/dualalloc.hpp"
#include "tris/rissolver.hpp"

namespace tris {

struct ObjectiveDiagnostics {
  Eigen::VectorXd user_rates;          // bit/s
  double max_power_excess = 0.0;       // max_k (sum_n p - p_max) / p_max, clipped at 0
  double max_modulus = 0.0;            // max_m |c_m|
  double min_qos_slack = 0.0;          // min_k rate_k - r_min, bit/s
  std::vector<std::string> issues;     // human-readable constraint violations
};

// Total rate W sum_{k,n} a log2(1 + gamma) with gamma from snr_and_rate.
// Shapes must agree; violated constraints are listed in `diag`, never clamped.
double evaluate_objective(const AllocationState& alloc, const CVector& coefficient, const ChannelRealization& real,
                          const SystemConfig& cfg, ObjectiveDiagnostics* diag = nullptr);

struct AoParams {
  DualSolveParams dual;
  ScaParams sca;
  double tolerance = 1e-3;  // relative objective change between iterations
  int max_iterations = 50;
  double qos_tolerance = 1e-9;  // relative, applied when accepting a coefficient
};

struct Solution {
  AllocationState allocation;
  CVector coefficient;
  CMatrix lifted;
  double sum_rate = 0.0;
  Eigen::VectorXd user_rates;
};

struct AoReport {
  std::vector<double> trace;  // trace[t] = R(A^t, P^t, c^t)
  std::vector<DualReport> dual_reports;
  std::vector<ScaReport> sca_reports;
  std::vector<bool> coefficient_accepted;
  bool converged = false;
  bool infeasible = false;
  int iterations = 0;
  double allocation_seconds = 0.0;
  double ris_seconds = 0.0;
  double total_seconds = 0.0;
};

struct AoResult {
  Solution solution;
  AoReport report;
};

// Alternates dual allocation and the RIS stage until the relative objective
// change drops below the tolerance. A coefficient is kept only if it does not
// lower the rate of the current allocation and keeps every QoS floor; the
// allocation stage is seeded with the previous assignment. Returns the best
// iterate.
AoResult alternate(const ChannelRealization& real, const SystemConfig& cfg, const AoParams& params);
AoResult alternate(const ChannelRealization& real, const SystemConfig& cfg, const AoParams& params,
                   const CVector& c0);

// One allocation pass at c0 followed by one RIS stage.
AoResult three_stage(const ChannelRealization& real, const SystemConfig& cfg, const AoParams& params);

}  // namespace tris
