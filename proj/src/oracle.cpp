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

#include "tris/oracle.hpp"

#include <cmath>
#include <numbers>

#include "tris/error.hpp"

namespace tris {

namespace {

long long ipow(long long base, int exp) {
  long long out = 1;
  for (int i = 0; i < exp; ++i) {
    out *= base;
    if (out > 2000000000000LL) return out;
  }
  return out;
}

struct UserBest {
  double rate = -1.0;  // bit/s, -1 if the floor cannot be met
  std::vector<double> power;
};

// Best grid power split of one user's budget over the given subcarriers.
UserBest best_user_power(int k, const std::vector<int>& carriers, const GammaTable& gamma, const SystemConfig& cfg,
                         int points, long long& states) {
  const double pmax = cfg.user_max_power(k);
  const double w = cfg.subcarrier_bandwidth();
  const double floor = cfg.user_min_rate(k);
  const int count = static_cast<int>(carriers.size());
  UserBest best;
  std::vector<int> idx(static_cast<std::size_t>(count), 0);
  while (true) {
    ++states;
    int used = 0;
    for (int i : idx) used += i;
    // Grid steps are pmax / (points - 1); the budget allows points - 1 of them.
    if (used <= points - 1) {
      double rate = 0.0;
      for (int i = 0; i < count; ++i) {
        const double p = idx[static_cast<std::size_t>(i)] * pmax / (points - 1);
        rate += w * std::log2(1.0 + p * gamma(k, carriers[static_cast<std::size_t>(i)]));
      }
      if (rate >= floor && rate > best.rate) {
        best.rate = rate;
        best.power.resize(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) best.power[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i)] * pmax / (points - 1);
      }
    }
    int pos = 0;
    while (pos < count && ++idx[static_cast<std::size_t>(pos)] == points) idx[static_cast<std::size_t>(pos++)] = 0;
    if (pos == count) break;
  }
  return best;
}

}  // namespace

OracleAllocation brute_force_allocation(const GammaTable& gamma, const SystemConfig& cfg, const OracleGrid& grid) {
  const int K = gamma.num_users();
  const int N = gamma.num_subcarriers();
  if (grid.power_points < 8) fail(ErrorCode::invalid_argument, "power grid needs at least 8 points");
  if (K * N > 8) fail(ErrorCode::too_large, "oracle allocation needs K * N <= 8");
  const long long total = ipow(K + 1, N) * ipow(grid.power_points, N);
  if (total > 100000000LL) fail(ErrorCode::too_large, "oracle enumeration exceeds 1e8 states");

  OracleAllocation best;
  best.objective = -1.0;
  best.owner.assign(static_cast<std::size_t>(N), -1);
  best.power = RMatrix::Zero(K, N);
  std::vector<int> owner(static_cast<std::size_t>(N), -1);
  while (true) {
    double objective = 0.0;
    bool feasible = true;
    RMatrix power = RMatrix::Zero(K, N);
    for (int k = 0; k < K && feasible; ++k) {
      std::vector<int> carriers;
      for (int n = 0; n < N; ++n)
        if (owner[static_cast<std::size_t>(n)] == k) carriers.push_back(n);
      const UserBest ub = best_user_power(k, carriers, gamma, cfg, grid.power_points, best.states);
      if (ub.rate < 0.0) {
        feasible = false;
        break;
      }
      objective += ub.rate;
      for (std::size_t i = 0; i < carriers.size(); ++i) power(k, carriers[i]) = ub.power[i];
    }
    if (feasible && objective > best.objective) {
      best.objective = objective;
      best.owner = owner;
      best.power = power;
    }
    int pos = 0;
    while (pos < N && ++owner[static_cast<std::size_t>(pos)] == K) owner[static_cast<std::size_t>(pos++)] = -1;
    if (pos == N) break;
  }
  return best;
}

OraclePhase brute_force_phase(const ChannelRealization& real, const AllocationState& alloc, const SystemConfig& cfg,
                              const OracleGrid& grid) {
  const int M = real.num_elements;
  if (M > 4) fail(ErrorCode::too_large, "phase oracle needs M <= 4");
  if (grid.phase_points < 8 || grid.phase_points > 32) fail(ErrorCode::invalid_argument, "phase grid must have 8..32 points");
  const int G = grid.phase_points;
  const double w = cfg.subcarrier_bandwidth();
  const double noise = cfg.noise_power();

  OraclePhase best;
  best.objective = -1.0;
  std::vector<int> idx(static_cast<std::size_t>(M), 0);
  CVector c(M);
  while (true) {
    ++best.states;
    for (int m = 0; m < M; ++m) c[m] = std::polar(1.0, 2.0 * std::numbers::pi * idx[static_cast<std::size_t>(m)] / G);
    double objective = 0.0;
    for (int n = 0; n < real.num_subcarriers; ++n) {
      const int k = alloc.owner[static_cast<std::size_t>(n)];
      if (k < 0) continue;
      const CVector& h = real.h[static_cast<std::size_t>(n)];
      const CVector& g = real.user_channel(k, n);
      const cdouble scalar = (h.adjoint() * g.asDiagonal() * c)(0, 0);
      const double snr = alloc.power(k, n) * std::norm(scalar) * real.gap[static_cast<std::size_t>(k)] / noise;
      objective += w * std::log2(1.0 + snr);
    }
    if (objective > best.objective) {
      best.objective = objective;
      best.coefficient = c;
    }
    int pos = 1;  // c_0 stays at phase 0
    while (pos < M && ++idx[static_cast<std::size_t>(pos)] == G) idx[static_cast<std::size_t>(pos++)] = 0;
    if (pos >= M) break;
  }
  return best;
}

}  // namespace tris
