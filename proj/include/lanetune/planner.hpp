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

#ifndef LANETUNE__PLANNER_HPP_
#define LANETUNE__PLANNER_HPP_

#include <Eigen/Core>

#include <array>
#include <vector>

#include "lanetune/geometry.hpp"
#include "lanetune/kinematics.hpp"
#include "lanetune/qp_solver.hpp"

namespace lanetune
{

/// Planner cost-function parameters: weight seed
/// [w_d, w_theta, w_kappa, w_kappadot, w_u] (all strictly positive) and the
/// per-step decay lambda in [0, 1]. Stage k uses lambda^k times the seed.
struct CostParams
{
  std::array<double, 5> theta0 = {1.0, 1.0, 1.0, 1.0, 1.0};
  double lambda = 1.0;

  /// Throws std::invalid_argument when a weight is not strictly positive or
  /// lambda is outside [0, 1].
  void validate() const;
};

/// Weights of the upper-level simulation cost against the true lane center:
/// psi = [q_d, q_theta, q_kappa, q_kappadot, r_u], all strictly positive.
struct DesiredCostParams
{
  std::array<double, 5> psi = {1.0, 1.0, 1.0, 1.0, 1.0};

  void validate() const;

  /// Using the desired weights directly as planner weights (lambda = 1) is
  /// the tuning baseline.
  CostParams as_cfp() const {return CostParams{psi, 1.0};}
};

/// Horizon-dependent weights: Q_k = lambda^k diag(w_d..w_kappadot) for
/// k = 0..N and R_k = lambda^k w_u for k = 0..N-1. Q entries are returned
/// as diagonal 4-vectors.
struct HorizonWeights
{
  std::vector<Eigen::Vector4d> Q;  // N+1 entries
  std::vector<double> R;           // N entries
};

HorizonWeights expand_weights(const CostParams & cfp, int horizon);

/// Everything one receding-horizon solve needs, with the reference curve
/// still attached. Positions are arc lengths on the estimated curve for
/// steps 0..N; velocities cover steps 0..N-1.
struct PlanningContext
{
  LateralState x0;
  std::vector<double> velocities;
  std::vector<double> positions;
  const Curve * est_curve = nullptr;
  double Ts = 0.1;
  double u_min = -0.02;
  double u_max = 0.02;
};

/// Curve-free planning inputs; the hot path of the closed-loop simulation
/// precomputes these once per step since they do not depend on the CFP.
struct HorizonData
{
  LateralState x0;
  std::vector<double> velocities;        // N
  std::vector<Eigen::Vector4d> x_des;    // N+1, entries [0, theta_r, kappa_r, kappadot_r]
  std::vector<double> z;                 // N, reference heading disturbances
  double Ts = 0.1;
  double u_min = -0.02;
  double u_max = 0.02;

  int horizon() const {return static_cast<int>(velocities.size());}
};

/// Desired states [0, theta_r, kappa_r, kappadot_r] at the given arc
/// positions of the estimated curve.
std::vector<Eigen::Vector4d> desired_states(
  const Curve & est_curve, const std::vector<double> & positions);

/// Reference-heading disturbances z_k = theta_r(s_k) from the estimated curve.
std::vector<double> disturbances(const Curve & est_curve, const std::vector<double> & positions);

/// Samples the estimated curve into curve-free horizon data.
HorizonData make_horizon_data(const PlanningContext & ctx);

/// Condenses the horizon into a dense box QP over the input sequence:
/// H = G'QG + R, g = G'Q(F x0 + W z - x_des), with the stacked prediction
/// x = F x0 + G u + W z over steps 1..N. The k = 0 state term is constant
/// in u and therefore not part of the QP (BoxQP::constant holds the
/// u-independent remainder of the k >= 1 cost). Requires lambda > 0 so that
/// H stays positive definite.
BoxQP condense(const HorizonData & data, const CostParams & cfp);
BoxQP condense(const PlanningContext & ctx, const CostParams & cfp);

struct PlanResult
{
  Eigen::VectorXd u_seq;              // N inputs
  std::vector<LateralState> states;   // N+1 predicted states
  double objective = 0.0;             // horizon cost without the constant k=0 term
  int qp_iterations = 0;
  double kkt_residual = 0.0;
};

/// Solves the condensed QP and rolls the optimal inputs through the
/// kinematics. Throws NumericalError when the QP solver does not converge.
/// In receding-horizon use the caller applies u_seq[0] only.
PlanResult plan(
  const HorizonData & data, const CostParams & cfp, const QpConfig & qp_cfg = {},
  const Eigen::VectorXd * warm_start = nullptr);
PlanResult plan(
  const PlanningContext & ctx, const CostParams & cfp, const QpConfig & qp_cfg = {},
  const Eigen::VectorXd * warm_start = nullptr);

}  // namespace lanetune

#endif  // LANETUNE__PLANNER_HPP_
