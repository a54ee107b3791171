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

#include "tris/dualalloc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "tris/error.hpp"

namespace tris {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kMinLambda = 1e-12;

// log(1 + x) - x / (1 + x), accurate for small x.
double criterion_core(double x) {
  if (x < 1e-4) return x * x * (0.5 - x * (2.0 / 3.0 - 0.75 * x));
  return std::log1p(x) - x / (1.0 + x);
}

struct Candidate {
  std::vector<int> owner;
  RMatrix power;
  Eigen::VectorXd levels;
  Eigen::VectorXd mu;
  double sum_rate = -1.0;
  bool feasible = false;
  int iteration = 0;
};

double user_rate_after_fill(int k, const std::vector<int>& owner, const GammaTable& gamma, double budget,
                            double bandwidth, RMatrix& scratch) {
  water_fill(k, owner, gamma, budget, scratch);
  double rate = 0.0;
  for (std::size_t n = 0; n < owner.size(); ++n)
    if (owner[n] == k) rate += std::log1p(scratch(k, static_cast<Eigen::Index>(n)) * gamma(k, static_cast<int>(n)));
  return bandwidth * rate / kLn2;
}

// Hands subcarriers to users below their rate floor, one at a time, choosing
// the move with the best change in total rate. A donor must keep its own
// floor. Returns false if some floor cannot be reached this way.
bool repair_qos(std::vector<int>& owner, const GammaTable& gamma, const SystemConfig& cfg) {
  const int K = gamma.num_users();
  const int N = gamma.num_subcarriers();
  const double w = cfg.subcarrier_bandwidth();
  RMatrix scratch = RMatrix::Zero(K, N);
  std::vector<double> rate(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) rate[k] = user_rate_after_fill(k, owner, gamma, cfg.user_max_power(k), w, scratch);
  for (int step = 0; step < K * N; ++step) {
    int needy = -1;
    for (int k = 0; k < K && needy < 0; ++k)
      if (rate[k] < cfg.user_min_rate(k) * (1.0 - 1e-12)) needy = k;
    if (needy < 0) return true;
    double best_delta = -std::numeric_limits<double>::infinity();
    int best_n = -1;
    double best_needy = 0.0, best_donor = 0.0;
    std::vector<int> trial = owner;
    for (int n = 0; n < N; ++n) {
      const int donor = owner[static_cast<std::size_t>(n)];
      if (donor == needy || !(gamma(needy, n) > 0.0)) continue;
      trial[static_cast<std::size_t>(n)] = needy;
      const double r_needy = user_rate_after_fill(needy, trial, gamma, cfg.user_max_power(needy), w, scratch);
      double r_donor = 0.0;
      bool ok = true;
      if (donor >= 0) {
        r_donor = user_rate_after_fill(donor, trial, gamma, cfg.user_max_power(donor), w, scratch);
        ok = r_donor >= cfg.user_min_rate(donor) * (1.0 - 1e-12);
      }
      trial[static_cast<std::size_t>(n)] = donor;
      if (!ok) continue;
      const double delta = r_needy + r_donor - rate[needy] - (donor >= 0 ? rate[donor] : 0.0);
      if (delta > best_delta) {
        best_delta = delta;
        best_n = n;
        best_needy = r_needy;
        best_donor = r_donor;
      }
    }
    if (best_n < 0) return false;
    const int donor = owner[static_cast<std::size_t>(best_n)];
    owner[static_cast<std::size_t>(best_n)] = needy;
    rate[needy] = best_needy;
    if (donor >= 0) rate[donor] = best_donor;
  }
  return false;
}

// Best-improvement local search over single reassignments and pairwise
// swaps of subcarriers. Every move keeps the rate floors of the users it
// touches. The dual iterates can oscillate between assignments without
// visiting the best one; this closes most of that gap.
void local_search(std::vector<int>& owner, const GammaTable& gamma, const SystemConfig& cfg) {
  const int K = gamma.num_users();
  const int N = gamma.num_subcarriers();
  const double w = cfg.subcarrier_bandwidth();
  RMatrix scratch = RMatrix::Zero(K, N);
  std::vector<double> rate(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) rate[k] = user_rate_after_fill(k, owner, gamma, cfg.user_max_power(k), w, scratch);
  auto floor_ok = [&](int k, double r) { return r >= cfg.user_min_rate(k) * (1.0 - 1e-12); };
  auto at = [](std::vector<int>& o, int n) -> int& { return o[static_cast<std::size_t>(n)]; };
  for (int pass = 0; pass < K * N; ++pass) {
    double total = 0.0;
    for (double r : rate) total += r;
    double best_delta = 1e-12 * std::max(total, 1.0);
    int best_n = -1, best_m = -1, best_user = -1;
    double best_ra = 0.0, best_rb = 0.0;
    std::vector<int> trial = owner;
    // move n to user b
    for (int n = 0; n < N; ++n) {
      const int a = at(owner, n);
      for (int b = 0; b < K; ++b) {
        if (b == a || !(gamma(b, n) > 0.0)) continue;
        at(trial, n) = b;
        const double rb = user_rate_after_fill(b, trial, gamma, cfg.user_max_power(b), w, scratch);
        const double ra = a >= 0 ? user_rate_after_fill(a, trial, gamma, cfg.user_max_power(a), w, scratch) : 0.0;
        at(trial, n) = a;
        if (a >= 0 && !floor_ok(a, ra)) continue;
        const double delta = rb - rate[b] + (a >= 0 ? ra - rate[a] : 0.0);
        if (delta > best_delta) {
          best_delta = delta;
          best_n = n;
          best_m = -1;
          best_user = b;
          best_ra = ra;
          best_rb = rb;
        }
      }
    }
    // swap the owners of n and m
    for (int n = 0; n < N; ++n) {
      const int a = at(owner, n);
      if (a < 0) continue;
      for (int m = n + 1; m < N; ++m) {
        const int b = at(owner, m);
        if (b < 0 || b == a) continue;
        at(trial, n) = b;
        at(trial, m) = a;
        const double ra = user_rate_after_fill(a, trial, gamma, cfg.user_max_power(a), w, scratch);
        const double rb = user_rate_after_fill(b, trial, gamma, cfg.user_max_power(b), w, scratch);
        at(trial, n) = a;
        at(trial, m) = b;
        if (!floor_ok(a, ra) || !floor_ok(b, rb)) continue;
        const double delta = ra + rb - rate[a] - rate[b];
        if (delta > best_delta) {
          best_delta = delta;
          best_n = n;
          best_m = m;
          best_user = -1;
          best_ra = ra;
          best_rb = rb;
        }
      }
    }
    if (best_n < 0) return;
    const int a = at(owner, best_n);
    if (best_m < 0) {
      at(owner, best_n) = best_user;
      rate[best_user] = best_rb;
      if (a >= 0) rate[a] = best_ra;
    } else {
      const int b = at(owner, best_m);
      at(owner, best_n) = b;
      at(owner, best_m) = a;
      rate[a] = best_ra;
      rate[b] = best_rb;
    }
  }
}

Candidate polish(std::vector<int> owner, const GammaTable& gamma, const SystemConfig& cfg) {
  const int K = gamma.num_users();
  repair_qos(owner, gamma, cfg);
  Candidate c;
  c.owner = std::move(owner);
  c.power = RMatrix::Zero(K, gamma.num_subcarriers());
  c.levels = Eigen::VectorXd::Zero(K);
  for (int k = 0; k < K; ++k) c.levels[k] = water_fill(k, c.owner, gamma, cfg.user_max_power(k), c.power);
  const Eigen::VectorXd rates = user_rates(c.owner, c.power, gamma, cfg.subcarrier_bandwidth());
  c.sum_rate = rates.sum();
  c.feasible = true;
  for (int k = 0; k < K; ++k)
    if (rates[k] < cfg.user_min_rate(k) * (1.0 - 1e-12)) c.feasible = false;
  return c;
}

}  // namespace

RMatrix AllocationState::assignment_matrix() const {
  RMatrix a = RMatrix::Zero(power.rows(), power.cols());
  for (std::size_t n = 0; n < owner.size(); ++n)
    if (owner[n] >= 0) a(owner[n], static_cast<Eigen::Index>(n)) = 1.0;
  return a;
}

double AllocationState::user_power(int k) const {
  double total = 0.0;
  for (std::size_t n = 0; n < owner.size(); ++n)
    if (owner[n] == k) total += power(k, static_cast<Eigen::Index>(n));
  return total;
}

GammaTable gamma_table(const ChannelRealization& real, const CVector& coefficient, const SystemConfig& cfg) {
  if (coefficient.size() != real.num_elements) fail(ErrorCode::invalid_argument, "coefficient has the wrong length");
  GammaTable table;
  table.values.resize(real.num_users, real.num_subcarriers);
  const double noise = cfg.noise_power();
  for (int k = 0; k < real.num_users; ++k)
    for (int n = 0; n < real.num_subcarriers; ++n)
      table.values(k, n) = std::norm(real.cascaded(k, n).dot(coefficient)) * real.gap[static_cast<std::size_t>(k)] / noise;
  return table;
}

double power_step(double lambda, double mu, double gamma, double bandwidth) {
  if (!(gamma > 0.0)) return 0.0;
  const double level = (bandwidth + mu) / (std::max(lambda, kMinLambda) * kLn2);
  return std::max(0.0, level - 1.0 / gamma);
}

double allocation_criterion(double power, double gamma, double bandwidth, double mu) {
  const double x = power * gamma;
  if (!(x > 0.0)) return 0.0;
  return (bandwidth + mu) * criterion_core(x) / kLn2;
}

std::vector<int> assign_subcarriers(const RMatrix& chi) {
  std::vector<int> owner(static_cast<std::size_t>(chi.cols()), -1);
  for (Eigen::Index n = 0; n < chi.cols(); ++n) {
    double best = 0.0;
    for (Eigen::Index k = 0; k < chi.rows(); ++k) {
      if (chi(k, n) > best) {
        best = chi(k, n);
        owner[static_cast<std::size_t>(n)] = static_cast<int>(k);
      }
    }
  }
  return owner;
}

Eigen::VectorXd user_rates(const std::vector<int>& owner, const RMatrix& power, const GammaTable& gamma,
                           double bandwidth) {
  Eigen::VectorXd rates = Eigen::VectorXd::Zero(gamma.num_users());
  for (std::size_t n = 0; n < owner.size(); ++n) {
    const int k = owner[n];
    if (k < 0) continue;
    const auto col = static_cast<Eigen::Index>(n);
    rates[k] += bandwidth * std::log1p(power(k, col) * gamma(k, static_cast<int>(n))) / kLn2;
  }
  return rates;
}

MultiplierUpdate update_multipliers(const Eigen::VectorXd& lambda, const Eigen::VectorXd& mu,
                                    const std::vector<int>& owner, const RMatrix& power, const GammaTable& gamma,
                                    const SystemConfig& cfg, const Eigen::VectorXd& power_steps,
                                    const Eigen::VectorXd& qos_steps) {
  const int K = gamma.num_users();
  const double w = cfg.subcarrier_bandwidth();
  MultiplierUpdate up;
  up.lambda.resize(K);
  up.mu.resize(K);
  up.power_residual.resize(K);
  up.rate_residual.resize(K);
  const Eigen::VectorXd rates = user_rates(owner, power, gamma, 1.0);
  for (int k = 0; k < K; ++k) {
    double used = 0.0;
    for (std::size_t n = 0; n < owner.size(); ++n)
      if (owner[n] == k) used += power(k, static_cast<Eigen::Index>(n));
    up.power_residual[k] = cfg.user_max_power(k) - used;
    up.rate_residual[k] = rates[k] - cfg.user_min_rate(k) / w;
    up.lambda[k] = std::max(0.0, lambda[k] - power_steps[k] * up.power_residual[k]);
    up.mu[k] = std::max(0.0, mu[k] - qos_steps[k] * up.rate_residual[k]);
  }
  return up;
}

double dual_value(const Eigen::VectorXd& lambda, const Eigen::VectorXd& mu, const GammaTable& gamma,
                  const SystemConfig& cfg) {
  const int K = gamma.num_users();
  const double w = cfg.subcarrier_bandwidth();
  double value = 0.0;
  for (int n = 0; n < gamma.num_subcarriers(); ++n) {
    double best = 0.0;
    for (int k = 0; k < K; ++k) {
      const double p = power_step(lambda[k], mu[k], gamma(k, n), w);
      const double v = (w + mu[k]) * std::log1p(p * gamma(k, n)) / kLn2 - std::max(lambda[k], kMinLambda) * p;
      best = std::max(best, v);
    }
    value += best;
  }
  for (int k = 0; k < K; ++k) value += lambda[k] * cfg.user_max_power(k) - mu[k] * cfg.user_min_rate(k) / w;
  return value;
}

double water_fill(int user, const std::vector<int>& owner, const GammaTable& gamma, double budget, RMatrix& power) {
  power.row(user).setZero();
  std::vector<std::pair<double, int>> inverse;  // (1/Gamma, n)
  for (std::size_t n = 0; n < owner.size(); ++n) {
    const double g = gamma(user, static_cast<int>(n));
    if (owner[n] == user && g > 0.0) inverse.emplace_back(1.0 / g, static_cast<int>(n));
  }
  if (inverse.empty() || !(budget > 0.0)) return 0.0;
  std::sort(inverse.begin(), inverse.end());
  double prefix = 0.0;
  std::size_t active = 0;
  double level = 0.0;
  for (std::size_t c = 0; c < inverse.size(); ++c) {
    prefix += inverse[c].first;
    const double candidate = (budget + prefix) / static_cast<double>(c + 1);
    if (candidate <= inverse[c].first) break;
    active = c + 1;
    level = candidate;
  }
  for (std::size_t i = 0; i < active; ++i) power(user, inverse[i].second) = level - inverse[i].first;
  return level;
}

AllocationResult solve_allocation(const GammaTable& gamma, const SystemConfig& cfg, const DualSolveParams& params,
                                  const std::vector<int>* incumbent) {
  const auto start = std::chrono::steady_clock::now();
  const int K = gamma.num_users();
  const int N = gamma.num_subcarriers();
  if (K != cfg.num_users || N != cfg.num_subcarriers)
    fail(ErrorCode::invalid_argument, "gamma table does not match the configuration");
  if (!(params.epsilon > 0.0) || params.max_iterations < 1 || !(params.power_step > 0.0) || !(params.qos_step > 0.0))
    fail(ErrorCode::invalid_argument, "dual solver parameters must be positive");
  if (!gamma.values.allFinite() || (gamma.values.array() < 0.0).any())
    fail(ErrorCode::invalid_argument, "gamma table must be finite and non-negative");

  const double w = cfg.subcarrier_bandwidth();
  Eigen::VectorXd lambda(K), mu = Eigen::VectorXd::Zero(K), power_step0(K), qos_step0(K);
  for (int k = 0; k < K; ++k) {
    const double budget = cfg.user_max_power(k);
    double inv_sum = 0.0;
    int usable = 0;
    for (int n = 0; n < N; ++n)
      if (gamma(k, n) > 0.0) {
        inv_sum += 1.0 / gamma(k, n);
        ++usable;
      }
    // initial water level: the per-user budget share plus the mean noise floor
    const double level0 = budget / std::max(1.0, static_cast<double>(N) / K) + (usable ? inv_sum / usable : 0.0);
    lambda[k] = w / (kLn2 * level0);
    power_step0[k] = params.power_step * lambda[k] / budget;
    qos_step0[k] = params.qos_step * w / std::max(cfg.user_min_rate(k) / w, 1.0);
  }

  AllocationResult result;
  DualReport& rep = result.report;
  Candidate best;
  Candidate best_infeasible;
  auto offer = [&](Candidate&& c) {
    if (c.feasible) {
      if (!best.feasible || c.sum_rate > best.sum_rate) best = std::move(c);
    } else if (!best.feasible && c.sum_rate > best_infeasible.sum_rate) {
      best_infeasible = std::move(c);
    }
  };
  if (incumbent) {
    if (incumbent->size() != static_cast<std::size_t>(N)) fail(ErrorCode::invalid_argument, "incumbent has the wrong length");
    Candidate c = polish(*incumbent, gamma, cfg);
    c.mu = mu;
    offer(std::move(c));
  }

  rep.best_dual = std::numeric_limits<double>::infinity();
  RMatrix power(K, N);
  RMatrix chi(K, N);
  std::vector<int> last_owner;
  for (int i = 1; i <= params.max_iterations; ++i) {
    for (int k = 0; k < K; ++k) {
      if (lambda[k] < params.lambda_floor) rep.lambda_clamped = true;
      const double lam = std::max(lambda[k], params.lambda_floor);
      for (int n = 0; n < N; ++n) {
        power(k, n) = power_step(lam, mu[k], gamma(k, n), w);
        chi(k, n) = allocation_criterion(power(k, n), gamma(k, n), w, mu[k]);
      }
    }
    const std::vector<int> owner = assign_subcarriers(chi);
    for (int n = 0; n < N; ++n)
      for (int k = 0; k < K; ++k)
        if (owner[static_cast<std::size_t>(n)] != k) power(k, n) = 0.0;

    if (owner != last_owner) {
      Candidate c = polish(owner, gamma, cfg);
      c.mu = mu;
      c.iteration = i;
      offer(std::move(c));
      last_owner = owner;
    }

    Eigen::VectorXd floored = lambda.cwiseMax(params.lambda_floor);
    rep.best_dual = std::min(rep.best_dual, dual_value(floored, mu, gamma, cfg));
    rep.dual_trace.push_back(rep.best_dual);

    const double scale = 1.0 / std::sqrt(static_cast<double>(i));
    const MultiplierUpdate up =
        update_multipliers(lambda, mu, owner, power, gamma, cfg, power_step0 * scale, qos_step0 * scale);
    double change = 0.0;
    for (int k = 0; k < K; ++k) {
      const double lam_ref = std::max({lambda[k], up.lambda[k], params.lambda_floor});
      change = std::max(change, std::abs(up.lambda[k] - lambda[k]) / lam_ref);
      change = std::max(change, std::abs(up.mu[k] - mu[k]) / (w + std::max(mu[k], up.mu[k])));
      rep.trace.push_back({i, k, up.lambda[k], up.mu[k], up.power_residual[k], up.rate_residual[k]});
    }
    lambda = up.lambda;
    mu = up.mu;
    rep.iterations = i;
    if ((mu.array() / w > params.mu_ceiling).any()) {
      rep.mu_diverged = true;
      break;
    }
    if (change < params.epsilon) {
      rep.converged = true;
      break;
    }
  }

  if (best.feasible) {
    std::vector<int> owner = best.owner;
    local_search(owner, gamma, cfg);
    if (owner != best.owner) {
      Candidate c = polish(owner, gamma, cfg);
      c.mu = best.mu;
      c.iteration = best.iteration;
      offer(std::move(c));
    }
  }
  const Candidate& chosen = best.feasible ? best : best_infeasible;
  rep.infeasible = !best.feasible;
  AllocationState& st = result.state;
  if (chosen.owner.empty()) {
    st.owner.assign(static_cast<std::size_t>(N), -1);
    st.power = RMatrix::Zero(K, N);
    st.mu = mu;
  } else {
    st.owner = chosen.owner;
    st.power = chosen.power;
    st.mu = chosen.mu;
    st.iteration = chosen.iteration;
  }
  // Prices consistent with the returned water levels; a user without power
  // has a slack budget and a zero price.
  st.lambda = Eigen::VectorXd::Zero(K);
  for (int k = 0; k < K; ++k) {
    const double level = chosen.owner.empty() ? 0.0 : chosen.levels[k];
    if (level > 0.0) st.lambda[k] = (w + st.mu[k]) / (level * kLn2);
  }
  const Eigen::VectorXd rates = user_rates(st.owner, st.power, gamma, w);
  rep.sum_rate = rates.sum();
  rep.power_slackness.resize(K);
  rep.rate_slackness.resize(K);
  for (int k = 0; k < K; ++k) {
    rep.power_slackness[k] = st.lambda[k] * (cfg.user_max_power(k) - st.user_power(k));
    rep.rate_slackness[k] = st.mu[k] * (rates[k] - cfg.user_min_rate(k)) / w;
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

AllocationResult solve_allocation(const ChannelRealization& real, const CVector& coefficient,
                                  const SystemConfig& cfg, const DualSolveParams& params) {
  return solve_allocation(gamma_table(real, coefficient, cfg), cfg, params);
}

}  // namespace tris
