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

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "tris/dualalloc.hpp"
#include "tris/error.hpp"
#include "tris/oracle.hpp"

using namespace tris;

namespace {

const double kLn2 = std::numbers::ln2;

SystemConfig tiny(int users, int subcarriers) {
  SystemConfig cfg;
  cfg.num_users = users;
  cfg.num_subcarriers = subcarriers;
  cfg.total_bandwidth = subcarriers * 1.0;  // W = 1
  cfg.min_rate = {0.0};
  return cfg;
}

GammaTable table(std::initializer_list<std::initializer_list<double>> rows) {
  GammaTable t;
  t.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  int k = 0;
  for (auto row : rows) {
    int n = 0;
    for (double v : row) t.values(k, n++) = v;
    ++k;
  }
  return t;
}

// Water level by bisection on sum_n [L - 1/Gamma_n]^+ = budget.
double bisect_level(const std::vector<double>& gammas, double budget) {
  double lo = 0.0, hi = budget + 1.0;
  for (double g : gammas) hi = std::max(hi, budget + 1.0 / g);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    double used = 0.0;
    for (double g : gammas) used += std::max(0.0, mid - 1.0 / g);
    (used > budget ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("gamma table") {
  SystemConfig cfg = tiny(1, 1);
  cfg.ris_rows = cfg.ris_cols = 2;
  cfg.noise_psd = 2.0;
  ChannelRealization real;
  real.num_users = 1;
  real.num_subcarriers = 1;
  real.num_elements = 4;
  Rng rng(17);
  CVector g(4), h(4), c(4);
  for (int m = 0; m < 4; ++m) {
    g[m] = complex_gaussian(rng);
    h[m] = complex_gaussian(rng);
    c[m] = complex_gaussian(rng);
  }
  real.g = {g};
  real.h = {h};
  real.gap = {0.7};
  cascade(real);
  const double literal = std::norm((h.adjoint() * g.asDiagonal() * c)(0, 0)) * 0.7 / 2.0;
  CHECK(gamma_table(real, c, cfg)(0, 0) == doctest::Approx(literal).epsilon(1e-12));
  CHECK(gamma_table(real, CVector::Zero(4), cfg)(0, 0) == 0.0);
  CHECK_THROWS_AS(gamma_table(real, CVector::Zero(3), cfg), Error);

  real.num_elements = 1;
  real.g = {CVector::Ones(1)};
  real.h = {CVector::Ones(1)};
  real.gap = {1.0};
  cascade(real);
  cfg.noise_psd = 1.0;
  CHECK(gamma_table(real, CVector::Ones(1), cfg)(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("optimal power on one subcarrier") {
  CHECK(power_step(1.0 / kLn2, 0.0, 1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(power_step(1.0 / (2.0 * kLn2), 0.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(power_step(0.5, 0.0, 1e12, 1.0) == doctest::Approx(1.0 / (0.5 * kLn2)).epsilon(1e-9));
  CHECK(power_step(0.5, 1.0, 1e12, 1.0) == doctest::Approx(2.0 / (0.5 * kLn2)).epsilon(1e-9));
  CHECK(power_step(1.0, 0.0, 0.0, 1.0) == 0.0);
}

TEST_CASE("allocation criterion") {
  CHECK(allocation_criterion(0.0, 5.0, 1.0, 0.0) == 0.0);
  CHECK(allocation_criterion(1.0, 1.0, 1.0, 0.0) == doctest::Approx(1.0 - 1.0 / (2.0 * kLn2)).epsilon(1e-12));
  CHECK(allocation_criterion(1.0, 1.0, 1.0, 0.0) == doctest::Approx(0.27865).epsilon(1e-4));
  // The criterion equals the Lagrangian (W + mu) log2(1 + p Gamma) - lambda p at the optimal power.
  const double w = 2.0, mu = 0.5, gamma = 3.0, lambda = 0.4;
  const double p = power_step(lambda, mu, gamma, w);
  REQUIRE(p > 0.0);
  CHECK(allocation_criterion(p, gamma, w, mu) ==
        doctest::Approx((w + mu) * std::log2(1.0 + p * gamma) - lambda * p).epsilon(1e-12));
  double prev = -1.0;
  for (double x = 0.0; x <= 50.0; x += 0.01) {
    const double chi = allocation_criterion(x, 1.0, 1.0, 0.0);
    CHECK(chi >= prev);
    prev = chi;
  }
  // series branch near zero agrees with the closed form
  for (double x : {1e-6, 5e-5, 9.9e-5, 1.01e-4, 1e-3})
    CHECK(allocation_criterion(x, 1.0, 1.0, 0.0) ==
          doctest::Approx((std::log1p(x) - x / (1.0 + x)) / kLn2).epsilon(1e-6));
}

TEST_CASE("subcarrier assignment") {
  RMatrix chi(2, 3);
  chi << 0.0, 3.0, 2.0,
         0.0, 1.0, 2.0;
  const auto owner = assign_subcarriers(chi);
  CHECK(owner == std::vector<int>{-1, 0, 0});
  chi << -1.0, 1.0, 2.0,
         -2.0, 4.0, 2.5;
  CHECK(assign_subcarriers(chi) == std::vector<int>{-1, 1, 1});
}

TEST_CASE("multiplier update") {
  SystemConfig cfg = tiny(1, 2);
  cfg.max_power = {1.0};
  cfg.min_rate = {1.0};
  const GammaTable gamma = table({{1.0, 1.0}});
  const std::vector<int> owner{0, -1};
  RMatrix power(1, 2);
  power << 1.0, 0.0;  // budget met, rate log2(2) = 1 = r_min / W
  Eigen::VectorXd lambda(1), mu(1), steps(1);
  lambda << 0.3;
  mu << 0.2;
  steps << 0.7;
  MultiplierUpdate up = update_multipliers(lambda, mu, owner, power, gamma, cfg, steps, steps);
  CHECK(up.lambda[0] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(up.mu[0] == doctest::Approx(0.2).epsilon(1e-14));

  power(0, 0) = 1.5;  // overuse by 0.5
  up = update_multipliers(lambda, mu, owner, power, gamma, cfg, steps, steps);
  CHECK(up.lambda[0] == doctest::Approx(0.3 + 0.7 * 0.5).epsilon(1e-14));
  CHECK(up.power_residual[0] == doctest::Approx(-0.5));

  lambda << 0.0;
  power(0, 0) = 0.25;
  up = update_multipliers(lambda, mu, owner, power, gamma, cfg, steps, steps);
  CHECK(up.lambda[0] == 0.0);
  CHECK(up.mu[0] > 0.2);  // rate below the floor raises its price
}

TEST_CASE("water filling matches bisection") {
  std::mt19937_64 rng(4);
  std::exponential_distribution<double> expo(1.0);
  for (int trial = 0; trial < 50; ++trial) {
    GammaTable gamma;
    gamma.values.resize(1, 6);
    std::vector<int> owner(6);
    std::vector<double> owned;
    for (int n = 0; n < 6; ++n) {
      gamma.values(0, n) = 5.0 * expo(rng);
      owner[static_cast<std::size_t>(n)] = (rng() % 3 == 0) ? -1 : 0;
      if (owner[static_cast<std::size_t>(n)] == 0) owned.push_back(gamma(0, n));
    }
    const double budget = 0.05 + expo(rng);
    RMatrix power = RMatrix::Zero(1, 6);
    const double level = water_fill(0, owner, gamma, budget, power);
    if (owned.empty()) {
      CHECK(level == 0.0);
      CHECK(power.sum() == 0.0);
      continue;
    }
    CHECK(level == doctest::Approx(bisect_level(owned, budget)).epsilon(1e-10));
    CHECK(power.sum() == doctest::Approx(budget).epsilon(1e-12));
    for (int n = 0; n < 6; ++n) {
      if (owner[static_cast<std::size_t>(n)] != 0) {
        CHECK(power(0, n) == 0.0);
      } else if (power(0, n) > 0.0) {
        CHECK(power(0, n) + 1.0 / gamma(0, n) == doctest::Approx(level).epsilon(1e-12));
      } else {
        CHECK(1.0 / gamma(0, n) >= level * (1 - 1e-12));
      }
    }
  }
}

TEST_CASE("single user, single subcarrier spends the whole budget") {
  SystemConfig cfg = tiny(1, 1);
  cfg.max_power = {0.3};
  const GammaTable gamma = table({{2.0}});
  const AllocationResult r = solve_allocation(gamma, cfg, DualSolveParams{});
  CHECK_FALSE(r.report.infeasible);
  CHECK(r.state.owner == std::vector<int>{0});
  CHECK(r.state.power(0, 0) == doctest::Approx(0.3).epsilon(1e-12));
  // the price that makes 0.3 the water-filling power: (W + mu)/(lambda ln2) = p + 1/Gamma
  CHECK(r.state.lambda[0] == doctest::Approx(1.0 / ((0.3 + 0.5) * kLn2)).epsilon(1e-9));
  CHECK(r.report.sum_rate == doctest::Approx(std::log2(1.6)).epsilon(1e-12));
}

TEST_CASE("zero channel gives the empty allocation") {
  SystemConfig cfg = tiny(2, 3);
  GammaTable gamma;
  gamma.values = RMatrix::Zero(2, 3);
  const AllocationResult r = solve_allocation(gamma, cfg, DualSolveParams{});
  CHECK(r.report.sum_rate == 0.0);
  CHECK(r.state.power.isZero(0.0));
}

TEST_CASE("invalid inputs are rejected") {
  SystemConfig cfg = tiny(2, 2);
  GammaTable gamma;
  gamma.values = RMatrix::Ones(2, 3);
  CHECK_THROWS_AS(solve_allocation(gamma, cfg, DualSolveParams{}), Error);
  gamma.values = RMatrix::Ones(2, 2);
  gamma.values(0, 0) = -1.0;
  CHECK_THROWS_AS(solve_allocation(gamma, cfg, DualSolveParams{}), Error);
  gamma.values(0, 0) = 1.0;
  DualSolveParams bad;
  bad.max_iterations = 0;
  CHECK_THROWS_AS(solve_allocation(gamma, cfg, bad), Error);
}

TEST_CASE("two users, two subcarriers against the exhaustive oracle") {
  std::mt19937_64 rng(2024);
  std::exponential_distribution<double> expo(1.0);
  SystemConfig cfg = tiny(2, 2);
  cfg.total_bandwidth = 2e6;
  cfg.max_power = {0.1, 0.2};
  for (int trial = 0; trial < 30; ++trial) {
    GammaTable gamma;
    gamma.values.resize(2, 2);
    for (int k = 0; k < 2; ++k)
      for (int n = 0; n < 2; ++n) gamma.values(k, n) = 100.0 * expo(rng);
    const AllocationResult r = solve_allocation(gamma, cfg, DualSolveParams{});
    const OracleAllocation o = brute_force_allocation(gamma, cfg, OracleGrid{});
    CHECK(r.report.sum_rate >= 0.98 * o.objective);
    for (int k = 0; k < 2; ++k) CHECK(r.state.user_power(k) <= cfg.user_max_power(k) * (1 + 1e-12));
  }
}

TEST_CASE("QoS floors are honored when reachable") {
  SystemConfig cfg = tiny(2, 4);
  cfg.total_bandwidth = 4e6;
  cfg.max_power = {0.2};
  const double w = cfg.subcarrier_bandwidth();
  // user 1 is much weaker and would get nothing without a floor
  const GammaTable gamma = table({{1e4, 2e4, 3e4, 1.5e4}, {10.0, 12.0, 9.0, 11.0}});
  cfg.min_rate = {0.0};
  const AllocationResult free = solve_allocation(gamma, cfg, DualSolveParams{});
  const Eigen::VectorXd free_rates = user_rates(free.state.owner, free.state.power, gamma, w);
  CHECK(free_rates[1] < 1e-9 * w);
  cfg.min_rate = {1.0 * w};
  const AllocationResult floored = solve_allocation(gamma, cfg, DualSolveParams{});
  CHECK_FALSE(floored.report.infeasible);
  const Eigen::VectorXd rates = user_rates(floored.state.owner, floored.state.power, gamma, w);
  CHECK(rates[0] >= w);
  CHECK(rates[1] >= w);
  CHECK(floored.report.sum_rate <= free.report.sum_rate);
}

TEST_CASE("unreachable QoS floor is reported infeasible") {
  SystemConfig cfg = tiny(2, 2);
  cfg.max_power = {0.1};
  cfg.min_rate = {50.0};  // 50 bit/s/Hz on one subcarrier is out of reach
  const GammaTable gamma = table({{1.0, 2.0}, {2.0, 1.0}});
  const AllocationResult r = solve_allocation(gamma, cfg, DualSolveParams{});
  CHECK(r.report.infeasible);
}

TEST_CASE("dual value bounds the primal") {
  std::mt19937_64 rng(9);
  std::exponential_distribution<double> expo(1.0);
  SystemConfig cfg = tiny(3, 5);
  cfg.total_bandwidth = 5e6;
  GammaTable gamma;
  gamma.values.resize(3, 5);
  for (int k = 0; k < 3; ++k)
    for (int n = 0; n < 5; ++n) gamma.values(k, n) = 1000.0 * expo(rng);
  const AllocationResult r = solve_allocation(gamma, cfg, DualSolveParams{});
  CHECK(r.report.best_dual >= r.report.sum_rate * (1 - 1e-9));
  for (std::size_t i = 1; i < r.report.dual_trace.size(); ++i)
    CHECK(r.report.dual_trace[i] <= r.report.dual_trace[i - 1]);
}
