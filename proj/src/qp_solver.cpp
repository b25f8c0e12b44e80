// Copyright 2026 The Lanetune Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lanetune/qp_solver.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lanetune/common.hpp"

namespace lanetune
{

namespace
{

Eigen::VectorXd clamp(const Eigen::VectorXd & u, const Eigen::VectorXd & lb, const Eigen::VectorXd & ub)
{
  return u.cwiseMax(lb).cwiseMin(ub);
}

double kkt_residual_inf(
  const Eigen::VectorXd & u, const Eigen::VectorXd & grad,
  const Eigen::VectorXd & lb, const Eigen::VectorXd & ub)
{
  return (u - clamp(u - grad, lb, ub)).lpNorm<Eigen::Infinity>();
}

}  // namespace

BoxQpResult solve_box_qp(const BoxQP & qp, const QpConfig & cfg, const Eigen::VectorXd * warm_start)
{
  const Eigen::Index n = qp.H.rows();
  if (qp.H.cols() != n || qp.g.size() != n || qp.lb.size() != n || qp.ub.size() != n) {
    throw std::invalid_argument("solve_box_qp: dimension mismatch");
  }
  if ((qp.lb.array() > qp.ub.array()).any()) {
    throw std::invalid_argument("solve_box_qp: lb > ub");
  }
  if (!qp.H.isApprox(qp.H.transpose(), 1e-12)) {
    throw std::invalid_argument("solve_box_qp: H is not symmetric");
  }
  if (!(cfg.tol_kkt > 0.0) || cfg.max_iter < 1) {
    throw std::invalid_argument("solve_box_qp: invalid config");
  }

  Eigen::LLT<Eigen::MatrixXd> llt_full(qp.H);
  if (llt_full.info() != Eigen::Success) {
    throw NumericalError("solve_box_qp: H is not positive definite");
  }

  BoxQpResult res;
  Eigen::VectorXd u = warm_start != nullptr ? clamp(*warm_start, qp.lb, qp.ub) :
    clamp(Eigen::VectorXd::Zero(n), qp.lb, qp.ub);

  // Fast path: the unconstrained minimizer inside the box solves the KKT
  // system exactly. This is the common case in lane keeping, where the
  // bounds only bind during transients.
  {
    const Eigen::VectorXd u_free = llt_full.solve(-qp.g);
    if ((u_free.array() >= qp.lb.array()).all() && (u_free.array() <= qp.ub.array()).all()) {
      res.u = u_free;
      res.iterations = 1;
      res.kkt_residual = kkt_residual_inf(u_free, qp.H * u_free + qp.g, qp.lb, qp.ub);
      if (cfg.record_trace) {
        res.objective_trace.push_back(qp.objective(u_free));
      }
      return res;
    }
  }

  double obj = qp.objective(u);
  if (cfg.record_trace) {
    res.objective_trace.push_back(obj);
  }

  std::vector<Eigen::Index> free_idx;
  free_idx.reserve(static_cast<std::size_t>(n));

  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    const Eigen::VectorXd grad = qp.H * u + qp.g;
    const double kkt = kkt_residual_inf(u, grad, qp.lb, qp.ub);
    if (kkt <= cfg.tol_kkt) {
      res.u = u;
      res.iterations = iter;
      res.kkt_residual = kkt;
      return res;
    }

    // Binding set: coordinates at a bound whose gradient pushes outward.
    free_idx.clear();
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool at_lo = u[i] <= qp.lb[i] && grad[i] > 0.0;
      const bool at_hi = u[i] >= qp.ub[i] && grad[i] < 0.0;
      const bool fixed = qp.lb[i] == qp.ub[i];
      if (!(at_lo || at_hi || fixed)) {
        free_idx.push_back(i);
      }
    }

    Eigen::VectorXd dir = Eigen::VectorXd::Zero(n);
    if (!free_idx.empty()) {
      const auto nf = static_cast<Eigen::Index>(free_idx.size());
      Eigen::MatrixXd Hff(nf, nf);
      Eigen::VectorXd gf(nf);
      for (Eigen::Index a = 0; a < nf; ++a) {
        gf[a] = grad[free_idx[a]];
        for (Eigen::Index b = 0; b < nf; ++b) {
          Hff(a, b) = qp.H(free_idx[a], free_idx[b]);
        }
      }
      Eigen::LLT<Eigen::MatrixXd> llt(Hff);
      if (llt.info() == Eigen::Success) {
        const Eigen::VectorXd df = llt.solve(-gf);
        for (Eigen::Index a = 0; a < nf; ++a) {
          dir[free_idx[a]] = df[a];
        }
      } else {
        dir = -grad;  // fall back to steepest descent on the full space
      }
    } else {
      dir = -grad;
    }

    // Armijo search along the projection arc u(alpha) = clamp(u + alpha dir).
    constexpr double kSigma = 1e-4;
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXd trial = clamp(u + alpha * dir, qp.lb, qp.ub);
      const double trial_obj = qp.objective(trial);
      const double model_decrease = grad.dot(trial - u);
      if (trial_obj <= obj + kSigma * model_decrease && trial_obj < obj) {
        u = trial;
        obj = trial_obj;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // No further descent is possible in floating point; report what we have.
      res.u = u;
      res.iterations = iter;
      res.kkt_residual = kkt;
      res.status = kkt <= cfg.tol_kkt ? QpStatus::kConverged : QpStatus::kMaxIterations;
      return res;
    }
    if (cfg.record_trace) {
      res.objective_trace.push_back(obj);
    }
  }

  const Eigen::VectorXd grad = qp.H * u + qp.g;
  res.u = u;
  res.iterations = cfg.max_iter;
  res.kkt_residual = kkt_residual_inf(u, grad, qp.lb, qp.ub);
  res.status = res.kkt_residual <= cfg.tol_kkt ? QpStatus::kConverged : QpStatus::kMaxIterations;
  return res;
}

}  // namespace lanetune
