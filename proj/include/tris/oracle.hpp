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

namespace tris {

// Exhaustive reference solvers for tiny instances. Test use only.
struct OracleGrid {
  int power_points = 16;  // j * p_max / (points - 1), j = 0..points-1
  int phase_points = 16;  // 2 pi i / points
};

struct OracleAllocation {
  std::vector<int> owner;
  RMatrix power;
  double objective = 0.0;  // bit/s; -1 when no assignment meets the QoS floors
  long long states = 0;
};

// Enumerates every assignment (including unassigned subcarriers) and, per
// user, every grid power vector within budget meeting the rate floor.
// Requires K * N <= 8 and at most 1e8 states.
OracleAllocation brute_force_allocation(const GammaTable& gamma, const SystemConfig& cfg, const OracleGrid& grid);

struct OraclePhase {
  CVector coefficient;
  double objective = 0.0;  // bit/s
  long long states = 0;
};

// Exhaustive unit-modulus phase search with c_0 = 1 (the global phase does not
// matter). Rates are evaluated from h^H diag(g) c. Requires M <= 4 and a grid
// of 8..32 points.
OraclePhase brute_force_phase(const ChannelRealization& real, const AllocationState& alloc, const SystemConfig& cfg,
                              const OracleGrid& grid);

}  // namespace tris
