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

namespace tris {

// One concave term weight * log(1 + gain * u^H C u) with unit-norm u.
struct LogTerm {
  int group = 0;
  double weight = 0.0;
  double gain = 0.0;
  CVector direction;
};

// maximize   sum_j weight_j log(1 + gain_j u_j^H C u_j) + Re tr(linear C)
// subject to sum_{j in group g} weight_j log(1 + ...) >= group_floor[g]
//            diag(C) <= 1,  C Hermitian PSD.
// Floors that are not positive, or missing from group_floor, are treated as
// absent.
struct ConcaveProgram {
  int dim = 0;
  std::vector<LogTerm> terms;
  CMatrix linear;
  std::vector<double> group_floor;

  double objective(const CMatrix& c) const;
  std::vector<double> group_values(const CMatrix& c) const;
};

struct BarrierParams {
  double rel_tol = 1e-6;        // duality-gap bound relative to |objective|
  double abs_tol = 1e-12;
  double growth = 30.0;         // barrier parameter multiplier between centerings
  double newton_tol = 1e-4;     // lambda^2 / 2 at which a centering stops
  int max_newton = 400;
  double start_shrink = 0.05;   // start = (1 - s) C0 + s/2 I
};

struct BarrierResult {
  CMatrix solution;
  double objective = 0.0;
  double gap_bound = 0.0;
  bool converged = false;
  bool infeasible = false;
  bool certified = false;  // infeasibility proven for a single violated group
  int newton_steps = 0;
  int centerings = 0;
};

// Log-barrier interior point method. Newton systems are solved through the
// Woodbury identity around the log-det Hessian C^-1 (.) C^-1, whose inverse
// C (.) C is applied directly; the diagonal and log terms form a low-rank
// correction of size dim + terms + groups. `start` must be Hermitian PSD with
// diag <= 1.
BarrierResult maximize_concave(const ConcaveProgram& program, const CMatrix& start, const BarrierParams& params);

// Re tr(a b) for Hermitian a, b.
double hermitian_inner(const CMatrix& a, const CMatrix& b);

}  // namespace tris
