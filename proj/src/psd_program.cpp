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

#include "tris/psd_program.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "tris/error.hpp"

namespace tris {

double hermitian_inner(const CMatrix& a, const CMatrix& b) { return (a.conjugate().cwiseProduct(b)).sum().real(); }

double ConcaveProgram::objective(const CMatrix& c) const {
  double value = linear.size() ? hermitian_inner(linear, c) : 0.0;
  for (const auto& t : terms) value += t.weight * std::log1p(t.gain * t.direction.dot(c * t.direction).real());
  return value;
}

std::vector<double> ConcaveProgram::group_values(const CMatrix& c) const {
  std::size_t groups = group_floor.size();
  for (const auto& t : terms) groups = std::max(groups, static_cast<std::size_t>(t.group) + 1);
  std::vector<double> out(groups, 0.0);
  for (const auto& t : terms)
    out.at(static_cast<std::size_t>(t.group)) += t.weight * std::log1p(t.gain * t.direction.dot(c * t.direction).real());
  return out;
}

namespace {

// Objective weight and constraint weight are kept apart so the same machinery
// runs the feasibility phase, where they differ.
struct Term {
  int group = -1;  // constrained group, or -1
  double obj_weight = 0.0;
  double con_weight = 0.0;
  double gain = 0.0;
  CVector u;
};

struct Problem {
  int dim = 0;
  std::vector<Term> terms;
  CMatrix linear;
  std::vector<double> floor;  // constrained groups only
};

class BarrierCore {
 public:
  explicit BarrierCore(const Problem& p) : p_(p) {
    const int J = static_cast<int>(p.terms.size());
    dirs_.resize(p.dim, J);
    for (int j = 0; j < J; ++j) dirs_.col(j) = p.terms[static_cast<std::size_t>(j)].u;
  }

  // u_j^H C u_j for every term.
  Eigen::VectorXd quads(const CMatrix& c) const {
    const CMatrix cu = c * dirs_;
    return dirs_.cwiseProduct(cu.conjugate()).colwise().sum().real().transpose();
  }

  double objective(const CMatrix& c) const {
    double value = p_.linear.size() ? hermitian_inner(p_.linear, c) : 0.0;
    const Eigen::VectorXd y = quads(c);
    for (std::size_t j = 0; j < p_.terms.size(); ++j) {
      const Term& t = p_.terms[j];
      if (t.obj_weight != 0.0) value += t.obj_weight * std::log1p(t.gain * y[static_cast<Eigen::Index>(j)]);
    }
    return value;
  }

  std::vector<double> slacks(const CMatrix& c) const {
    std::vector<double> s(p_.floor.size());
    for (std::size_t g = 0; g < s.size(); ++g) s[g] = -p_.floor[g];
    const Eigen::VectorXd y = quads(c);
    for (std::size_t j = 0; j < p_.terms.size(); ++j) {
      const Term& t = p_.terms[j];
      if (t.group >= 0) s[static_cast<std::size_t>(t.group)] += t.con_weight * std::log1p(t.gain * y[static_cast<Eigen::Index>(j)]);
    }
    return s;
  }

  int barrier_terms() const { return 2 * p_.dim + static_cast<int>(p_.floor.size()); }

  // Newton centering at barrier parameter t. Returns true once the Newton
  // decrement is below tolerance (or `stop` fires), false on stall or budget.
  bool center(CMatrix& c, double t, const BarrierParams& params, int& steps,
              const std::function<bool(const CMatrix&)>& stop = {}) const {
    const int M = p_.dim;
    const int J = static_cast<int>(p_.terms.size());
    const int G = static_cast<int>(p_.floor.size());
    const int R = M + J + G;
    while (steps < params.max_newton) {
      Eigen::LLT<CMatrix> llt(c);
      if (llt.info() != Eigen::Success) fail(ErrorCode::internal, "barrier iterate left the PSD cone");

      const CMatrix w = c * dirs_;  // column j is C u_j
      const CMatrix uw = dirs_.adjoint() * w;
      Eigen::VectorXd y(J), gam(J), coef(J);
      for (int j = 0; j < J; ++j) {
        y[j] = uw(j, j).real();
        gam[j] = p_.terms[static_cast<std::size_t>(j)].gain / (1.0 + p_.terms[static_cast<std::size_t>(j)].gain * y[j]);
      }
      std::vector<double> slack(static_cast<std::size_t>(G));
      for (int g = 0; g < G; ++g) slack[g] = -p_.floor[g];
      for (int j = 0; j < J; ++j) {
        const Term& term = p_.terms[static_cast<std::size_t>(j)];
        if (term.group >= 0) slack[term.group] += term.con_weight * std::log1p(term.gain * y[j]);
      }
      for (int j = 0; j < J; ++j) {
        const Term& term = p_.terms[static_cast<std::size_t>(j)];
        coef[j] = t * term.obj_weight + (term.group >= 0 ? term.con_weight / slack[term.group] : 0.0);
      }
      Eigen::VectorXd dvec(M);
      for (int m = 0; m < M; ++m) dvec[m] = 1.0 / (1.0 - c(m, m).real());

      // X = C grad C, assembled without forming C^-1.
      CMatrix inner = dvec.cast<cdouble>().asDiagonal();
      if (p_.linear.size()) inner -= t * p_.linear;
      const Eigen::VectorXd beta = coef.cwiseProduct(gam);
      CMatrix x = c * inner * c - c;
      x.noalias() -= (w * beta.asDiagonal()) * w.adjoint();

      // Low-rank basis [E_mm | V_j | G_g] with diagonal weights.
      Eigen::VectorXd dcoef(R);
      dcoef.head(M) = dvec.cwiseAbs2();
      dcoef.segment(M, J) = beta.cwiseProduct(gam);
      for (int g = 0; g < G; ++g) dcoef[M + J + g] = 1.0 / (slack[g] * slack[g]);

      Eigen::MatrixXd kmat(M + J, M + J);
      kmat.topLeftCorner(M, M) = c.cwiseAbs2();
      kmat.topRightCorner(M, J) = w.cwiseAbs2();
      kmat.bottomLeftCorner(J, M) = kmat.topRightCorner(M, J).transpose();
      kmat.bottomRightCorner(J, J) = uw.cwiseAbs2();
      const CMatrix xu = x * dirs_;
      Eigen::VectorXd ybase(M + J);
      ybase.head(M) = x.diagonal().real();
      ybase.tail(J) = dirs_.cwiseProduct(xu.conjugate()).colwise().sum().real().transpose();

      // Group directions are combinations of the V_j.
      Eigen::MatrixXd comb = Eigen::MatrixXd::Zero(M + J, G);
      for (int j = 0; j < J; ++j) {
        const Term& term = p_.terms[static_cast<std::size_t>(j)];
        if (term.group >= 0) comb(M + j, term.group) = term.con_weight * gam[j];
      }
      Eigen::MatrixXd full(R, R);
      full.topLeftCorner(M + J, M + J) = kmat;
      if (G > 0) {
        const Eigen::MatrixXd kc = kmat * comb;
        full.topRightCorner(M + J, G) = kc;
        full.bottomLeftCorner(G, M + J) = kc.transpose();
        full.bottomRightCorner(G, G) = comb.transpose() * kc;
      }
      Eigen::VectorXd yfull(R);
      yfull.head(M + J) = ybase;
      if (G > 0) yfull.tail(G) = comb.transpose() * ybase;

      const Eigen::VectorXd droot = dcoef.cwiseSqrt();
      Eigen::MatrixXd system = droot.asDiagonal() * full * droot.asDiagonal();
      system.diagonal().array() += 1.0;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(system);
      const Eigen::VectorXd z = droot.cwiseProduct(ldlt.solve(droot.cwiseProduct(yfull)));

      Eigen::VectorXd zv = z.segment(M, J);
      if (G > 0) zv += comb.middleRows(M, J) * z.tail(G);
      CMatrix hinv = x - c * z.head(M).cast<cdouble>().asDiagonal() * c;
      hinv.noalias() -= (w * zv.asDiagonal()) * w.adjoint();
      const CMatrix delta = -0.5 * (hinv + hinv.adjoint());

      // Directional derivative <grad, delta>; tr(C^-1 delta) via the
      // congruence Z = L^-1 delta L^-H, whose spectrum also bounds the step.
      CMatrix zmat = llt.matrixL().solve(delta);
      zmat = llt.matrixL().solve(zmat.adjoint()).adjoint();
      zmat = 0.5 * (zmat + zmat.adjoint());
      Eigen::SelfAdjointEigenSolver<CMatrix> eig(zmat, Eigen::EigenvaluesOnly);
      const Eigen::VectorXd ez = eig.eigenvalues();

      const CMatrix du = delta * dirs_;
      const Eigen::VectorXd dy = dirs_.cwiseProduct(du.conjugate()).colwise().sum().real().transpose();
      double slope = -ez.sum() - beta.dot(dy);
      if (p_.linear.size()) slope -= t * hermitian_inner(p_.linear, delta);
      for (int m = 0; m < M; ++m) slope += dvec[m] * delta(m, m).real();
      const double decrement = -slope;
      ++steps;
      if (!(decrement > 0.0) || decrement / 2.0 <= params.newton_tol) return true;

      double smax = 1.0;
      for (Eigen::Index i = 0; i < ez.size(); ++i)
        if (ez[i] < 0.0) smax = std::min(smax, -0.99 / ez[i]);
      for (int m = 0; m < M; ++m)
        if (delta(m, m).real() > 0.0) smax = std::min(smax, 0.99 * (1.0 - c(m, m).real()) / delta(m, m).real());
      const double lin_delta = p_.linear.size() ? hermitian_inner(p_.linear, delta) : 0.0;

      double s = smax;
      bool accepted = false;
      std::vector<double> new_slack(static_cast<std::size_t>(G));
      while (s > 1e-18) {
        double change = 0.0;  // phi(C + s delta) - phi(C)
        bool feasible = true;
        new_slack = slack;
        for (int j = 0; j < J; ++j) {
          const Term& term = p_.terms[static_cast<std::size_t>(j)];
          const double arg = s * dy[j] * gam[j];
          if (!(arg > -1.0)) {
            feasible = false;
            break;
          }
          const double dl = std::log1p(arg);
          change -= t * term.obj_weight * dl;
          if (term.group >= 0) new_slack[term.group] += term.con_weight * dl;
        }
        for (int g = 0; g < G && feasible; ++g) {
          if (!(new_slack[g] > 0.0)) feasible = false;
          else change -= std::log(new_slack[g] / slack[g]);
        }
        if (feasible) {
          change -= t * s * lin_delta;
          for (Eigen::Index i = 0; i < ez.size(); ++i) change -= std::log1p(s * ez[i]);
          for (int m = 0; m < M; ++m) change -= std::log1p(-s * delta(m, m).real() / (1.0 - c(m, m).real()));
          if (change <= 0.25 * s * slope) {
            accepted = true;
            break;
          }
        }
        s *= 0.5;
      }
      // Rounding keeps the line search from resolving tiny decrements.
      if (!accepted) return decrement / 2.0 <= 1e3 * params.newton_tol;
      c += s * delta;
      c = 0.5 * (c + c.adjoint()).eval();
      if (stop && stop(c)) return true;
    }
    return false;
  }

 private:
  const Problem& p_;
  CMatrix dirs_;  // M x J, column j is u_j
};

Problem main_problem(const ConcaveProgram& program, std::vector<int>& group_map) {
  Problem p;
  p.dim = program.dim;
  p.linear = program.linear;
  group_map.assign(program.group_floor.size(), -1);
  for (std::size_t g = 0; g < program.group_floor.size(); ++g) {
    if (program.group_floor[g] > 0.0) {
      group_map[g] = static_cast<int>(p.floor.size());
      p.floor.push_back(program.group_floor[g]);
    }
  }
  for (const auto& t : program.terms) {
    if (!(t.gain > 0.0) || !(t.weight > 0.0)) continue;
    Term term;
    const auto g = static_cast<std::size_t>(t.group);
    term.group = g < group_map.size() ? group_map[g] : -1;
    term.obj_weight = t.weight;
    term.con_weight = t.weight;
    term.gain = t.gain * t.direction.squaredNorm();
    term.u = t.direction.normalized();
    p.terms.push_back(std::move(term));
  }
  return p;
}

struct RunOutcome {
  bool converged = false;
  double gap = 0.0;
  int centerings = 0;
};

RunOutcome run_path(const BarrierCore& core, CMatrix& c, const BarrierParams& params, int& steps,
                    const std::function<bool(const CMatrix&)>& stop = {}) {
  RunOutcome out;
  const double m = core.barrier_terms();
  double t = m / std::max(std::abs(core.objective(c)), 1.0);
  while (true) {
    const bool centered = core.center(c, t, params, steps, stop);
    ++out.centerings;
    out.gap = m / t;
    if (stop && stop(c)) return out;
    if (!centered && steps >= params.max_newton) return out;
    const double scale = std::max(std::abs(core.objective(c)), 1.0);
    if (out.gap <= std::max(params.abs_tol, params.rel_tol * scale)) {
      out.converged = centered;
      return out;
    }
    if (!centered) return out;
    t *= params.growth;
  }
}

}  // namespace

BarrierResult maximize_concave(const ConcaveProgram& program, const CMatrix& start, const BarrierParams& params) {
  const int M = program.dim;
  if (M < 1 || start.rows() != M || start.cols() != M) fail(ErrorCode::invalid_argument, "start has the wrong shape");
  if (program.linear.size() && (program.linear.rows() != M || program.linear.cols() != M))
    fail(ErrorCode::invalid_argument, "linear term has the wrong shape");
  for (const auto& t : program.terms) {
    if (t.direction.size() != M) fail(ErrorCode::invalid_argument, "term direction has the wrong length");
    if (t.group < 0) fail(ErrorCode::invalid_argument, "term group must be >= 0");
  }

  std::vector<int> group_map;
  const Problem problem = main_problem(program, group_map);
  const BarrierCore core(problem);

  BarrierResult result;
  CMatrix c = (1.0 - params.start_shrink) * (0.5 * (start + start.adjoint())) +
              (0.5 * params.start_shrink) * CMatrix::Identity(M, M);

  // Feasibility phase: maximize the normalized rates of violated groups while
  // keeping the satisfied ones strictly feasible.
  std::vector<double> slack = core.slacks(c);
  std::vector<int> violated;
  for (std::size_t g = 0; g < slack.size(); ++g)
    if (!(slack[g] > 0.0)) violated.push_back(static_cast<int>(g));
  if (!violated.empty()) {
    Problem phase1;
    phase1.dim = M;
    std::vector<int> remap(problem.floor.size(), -1);
    for (std::size_t g = 0; g < problem.floor.size(); ++g) {
      if (std::find(violated.begin(), violated.end(), static_cast<int>(g)) == violated.end()) {
        remap[g] = static_cast<int>(phase1.floor.size());
        phase1.floor.push_back(problem.floor[g]);
      }
    }
    for (const auto& t : problem.terms) {
      if (t.group < 0) continue;
      Term term = t;
      if (remap[static_cast<std::size_t>(t.group)] < 0) {
        term.obj_weight = t.con_weight / problem.floor[static_cast<std::size_t>(t.group)];
        term.con_weight = 0.0;
        term.group = -1;
      } else {
        term.obj_weight = 0.0;
        term.group = remap[static_cast<std::size_t>(t.group)];
      }
      phase1.terms.push_back(std::move(term));
    }
    const BarrierCore feas(phase1);
    auto strictly_feasible = [&](const CMatrix& x) {
      const auto s = core.slacks(x);
      for (std::size_t g = 0; g < s.size(); ++g)
        if (!(s[g] > 1e-9 * problem.floor[g])) return false;
      return true;
    };
    run_path(feas, c, params, result.newton_steps, strictly_feasible);
    if (!strictly_feasible(c)) {
      result.solution = c;
      result.objective = program.objective(c);
      result.infeasible = true;
      result.certified = violated.size() == 1;
      return result;
    }
  }

  const RunOutcome out = run_path(core, c, params, result.newton_steps);
  result.solution = c;
  result.objective = program.objective(c);
  result.gap_bound = out.gap;
  result.converged = out.converged;
  result.centerings = out.centerings;
  return result;
}

}  // namespace tris
