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

#ifndef LANETUNE__KINEMATICS_HPP_
#define LANETUNE__KINEMATICS_HPP_

#include <Eigen/Core>

namespace lanetune
{

/// Lateral state relative to a reference curve: signed lateral offset [m],
/// vehicle heading [rad], driven curvature [1/m] and curvature rate [1/(m s)].
/// Only the lateral offset depends on which reference curve the state is
/// expressed against; heading and curvature are vehicle quantities.
struct LateralState
{
  double d = 0.0;
  double theta = 0.0;
  double kappa = 0.0;
  double kappa_dot = 0.0;

  Eigen::Vector4d vec() const {return {d, theta, kappa, kappa_dot};}

  static LateralState from_vec(const Eigen::Vector4d & v)
  {
    return {v[0], v[1], v[2], v[3]};
  }
};

/// Discrete linearized lateral kinematics x+ = A x + B u + E z, where u is
/// the second derivative of the driven curvature and z the reference-curve
/// heading acting as a disturbance.
struct SystemMatrices
{
  Eigen::Matrix4d A;
  Eigen::Vector4d B;
  Eigen::Vector4d E;
};

/// Closed-form discretization of the lateral kinematics for one step of
/// length Ts at (constant-within-step) velocity v. Requires v >= 0, Ts > 0.
SystemMatrices system_matrices(double v, double Ts);

/// One propagation step x+ = A x + B u + E z with matrices at (v, Ts).
/// No heading wrap is applied; the linear model assumes small angles
/// relative to the reference.
LateralState step(const LateralState & x, double u, double z, double v, double Ts);

}  // namespace lanetune

#endif  // LANETUNE__KINEMATICS_HPP_
