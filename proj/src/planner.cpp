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

#include "lanetune/planner.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lanetune/common.hpp"

namespace lanetune
{

void CostParams::validate() const
{
  for (double w : theta0) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("CostParams: weights must be strictly positive");
    }
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("CostParams: lambda must be in [0, 1]");
  }
}

void DesiredCostParams::validate() const
{
  for (double w : psi) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("DesiredCostParams: weights must be strictly positive");
    }
  }
}

HorizonWeights expand_weights(const CostParams & cfp, int horizon)
{
  cfp.validate();
  if (horizon < 1) {
    throw std::invalid_argument("expand_weights: horizon must be >= 1");
  }
  HorizonWeights hw;
  hw.Q.reserve(static_cast<std::size_t>(horizon) + 1);
  hw.R.reserve(static_cast<std::size_t>(horizon));
  double factor = 1.0;
  for (int k = 0; k <= horizon; ++k) {
    hw.Q.emplace_back(
      factor * cfp.theta0[0], factor * cfp.theta0[1],
      factor * cfp.theta0[2], factor * cfp.theta0[3]);
    if (k < horizon) {
      hw.R.push_back(factor * cfp.theta0[4]);
    }
    factor *= cfp.lambda;
  }
  return hw;
}

std::vector<Eigen::Vector4d> desired_states(
  const Curve & est_curve, const std::vector<double> & positions)
{
  std::vector<Eigen::Vector4d> out;
  out.reserve(positions.size());
  for (double s : positions) {
    const CurveFrame f = est_curve.sample_at(s);
    out.emplace_back(0.0, f.theta_r, f.kappa_r, f.kappa_dot_r);
  }
  return out;
}

std::vector<double> disturbances(const Curve & est_curve, const std::vector<double> & positions)
{
  std::vector<double> out;
  out.reserve(positions.size());
  for (double s : positions) {
    out.push_back(est_curve.sample_at(s).theta_r);
  }
  return out;
}

HorizonData make_horizon_data(const PlanningContext & ctx)
{
  if (ctx.est_curve == nullptr) {
    throw std::invalid_argument("make_horizon_data: missing estimated curve");
  }
  const std::size_t n = ctx.velocities.size();
  if (n < 1 || ctx.positions.size() != n + 1) {
    throw std::invalid_argument("make_horizon_data: positions must cover steps 0..N");
  }
  for (std::size_t k = 0; k + 1 < ctx.positions.size(); ++k) {
    if (ctx.positions[k + 1] < ctx.positions[k]) {
      throw std::invalid_argument("make_horizon_data: positions must be nondecreasing");
    }
  }

  HorizonData data;
  data.x0 = ctx.x0;
  data.velocities = ctx.velocities;
  data.Ts = ctx.Ts;
  data.u_min = ctx.u_min;
  data.u_max = ctx.u_max;
  data.x_des = desired_states(*ctx.est_curve, ctx.positions);
  std::vector<double> zpos(ctx.positions.begin(), ctx.positions.end() - 1);
  data.z = disturbances(*ctx.est_curve, zpos);
  return data;
}

BoxQP condense(const HorizonData & data, const CostParams & cfp)
{
  cfp.validate();
  if (!(cfp.lambda > 0.0)) {
    // lambda = 0 zeroes every weight beyond stage 0 and the condensed
    // Hessian loses positive definiteness.
    throw std::invalid_argument("condense: lambda must be strictly positive");
  }
  const int N = data.horizon();
  if (N < 1) {
    throw std::invalid_argument("condense: horizon must be >= 1");
  }
  if (data.x_des.size() != static_cast<std::size_t>(N) + 1 ||
    data.z.size() != static_cast<std::size_t>(N))
  {
    throw std::invalid_argument("condense: dimension mismatch");
  }
  if (!(data.u_min < data.u_max)) {
    throw std::invalid_argument("condense: u_min must be below u_max");
  }

  const HorizonWeights hw = expand_weights(cfp, N);

  std::vector<SystemMatrices> sys;
  sys.reserve(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) {
    sys.push_back(system_matrices(data.velocities[static_cast<std::size_t>(k)], data.Ts));
  }

  // Input-to-state map G: block row r corresponds to x_{r+1}; column j holds
  // Phi(r+1, j+1) B_j.
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(4 * N, N);
  for (int j = 0; j < N; ++j) {
    Eigen::Vector4d prop = sys[static_cast<std::size_t>(j)].B;
    G.block<4, 1>(4 * j, j) = prop;
    for (int r = j + 1; r < N; ++r) {
      prop = sys[static_cast<std::size_t>(r)].A * prop;
      G.block<4, 1>(4 * r, j) = prop;
    }
  }

  // Free response F x0 + W z minus the desired states, stacked over k = 1..N.
  Eigen::VectorXd c0(4 * N);
  Eigen::Vector4d x_free = data.x0.vec();
  for (int k = 0; k < N; ++k) {
    const auto & m = sys[static_cast<std::size_t>(k)];
    x_free = m.A * x_free + m.E * data.z[static_cast<std::size_t>(k)];
    c0.segment<4>(4 * k) = x_free - data.x_des[static_cast<std::size_t>(k) + 1];
  }

  // Row-scale by sqrt(Q) so that H = Gs'Gs + diag(R) and g = Gs' cs.
  Eigen::VectorXd sqrt_q(4 * N);
  for (int k = 0; k < N; ++k) {
    sqrt_q.segment<4>(4 * k) = hw.Q[static_cast<std::size_t>(k) + 1].cwiseSqrt();
  }
  const Eigen::MatrixXd Gs = sqrt_q.asDiagonal() * G;
  const Eigen::VectorXd cs = sqrt_q.asDiagonal() * c0;

  BoxQP qp;
  qp.H = Eigen::MatrixXd::Zero(N, N);
  qp.H.selfadjointView<Eigen::Lower>().rankUpdate(Gs.transpose());
  qp.H = qp.H.selfadjointView<Eigen::Lower>();
  for (int k = 0; k < N; ++k) {
    qp.H(k, k) += hw.R[static_cast<std::size_t>(k)];
  }
  qp.g = Gs.transpose() * cs;
  qp.constant = cs.squaredNorm();
  qp.lb = Eigen::VectorXd::Constant(N, data.u_min);
  qp.ub = Eigen::VectorXd::Constant(N, data.u_max);
  return qp;
}

BoxQP condense(const PlanningContext & ctx, const CostParams & cfp)
{
  return condense(make_horizon_data(ctx), cfp);
}

PlanResult plan(
  const HorizonData & data, const CostParams & cfp, const QpConfig & qp_cfg,
  const Eigen::VectorXd * warm_start)
{
  const BoxQP qp = condense(data, cfp);
  const BoxQpResult sol = solve_box_qp(qp, qp_cfg, warm_start);
  if (!sol.converged()) {
    throw NumericalError("plan: QP solver did not converge");
  }

  const int N = data.horizon();
  PlanResult out;
  out.u_seq = sol.u;
  out.states.reserve(static_cast<std::size_t>(N) + 1);
  out.states.push_back(data.x0);
  for (int k = 0; k < N; ++k) {
    out.states.push_back(
      step(
        out.states.back(), sol.u[k], data.z[static_cast<std::size_t>(k)],
        data.velocities[static_cast<std::size_t>(k)], data.Ts));
  }
  out.objective = qp.horizon_cost(sol.u);
  out.qp_iterations = sol.iterations;
  out.kkt_residual = sol.kkt_residual;
  return out;
}

PlanResult plan(
  const PlanningContext & ctx, const CostParams & cfp, const QpConfig & qp_cfg,
  const Eigen::VectorXd * warm_start)
{
  return plan(make_horizon_data(ctx), cfp, qp_cfg, warm_start);
}

}  // namespace lanetune
