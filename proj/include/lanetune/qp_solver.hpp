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

#ifndef LANETUNE__QP_SOLVER_HPP_
#define LANETUNE__QP_SOLVER_HPP_

#include <Eigen/Core>

#include <vector>

namespace lanetune
{

/// Box-constrained convex QP:  min 0.5 u'Hu + g'u  s.t.  lb <= u <= ub.
/// `constant` carries the input-independent part of the originating horizon
/// cost so callers can recover the full quadratic value.
struct BoxQP
{
  Eigen::MatrixXd H;
  Eigen::VectorXd g;
  Eigen::VectorXd lb;
  Eigen::VectorXd ub;
  double constant = 0.0;

  /// 0.5 u'Hu + g'u (the solver's objective).
  double objective(const Eigen::VectorXd & u) const
  {
    return 0.5 * u.dot(H * u) + g.dot(u);
  }

  /// u'Hu + 2 g'u + constant: the originating horizon cost at u
  /// (state terms k >= 1 plus input terms).
  double horizon_cost(const Eigen::VectorXd & u) const
  {
    return u.dot(H * u) + 2.0 * g.dot(u) + constant;
  }
};

struct QpConfig
{
  double tol_kkt = 1e-9;
  int max_iter = 10000;
  bool record_trace = false;  // keep per-iteration objectives in the result
};

enum class QpStatus
{
  kConverged,
  kMaxIterations,
};

struct BoxQpResult
{
  Eigen::VectorXd u;
  int iterations = 0;
  double kkt_residual = 0.0;
  QpStatus status = QpStatus::kConverged;
  std::vector<double> objective_trace;  // filled when record_trace is set

  bool converged() const {return status == QpStatus::kConverged;}
};

/// Projected-Newton active-set solve of a dense box QP. H must be symmetric
/// positive definite (throws NumericalError otherwise). Deterministic:
/// identical inputs produce bit-identical outputs. The optional warm start
/// is clamped into the box before use.
BoxQpResult solve_box_qp(
  const BoxQP & qp, const QpConfig & cfg = {},
  const Eigen::VectorXd * warm_start = nullptr);

}  // namespace lanetune

#endif  // LANETUNE__QP_SOLVER_HPP_
