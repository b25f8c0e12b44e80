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

#include "lanetune/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace lanetune
{

SystemMatrices system_matrices(double v, double Ts)
{
  if (!(Ts > 0.0)) {
    throw std::invalid_argument("system_matrices: sample time must be positive");
  }
  if (!(v >= 0.0)) {
    throw std::invalid_argument("system_matrices: velocity must be nonnegative");
  }
  if (!std::isfinite(v) || !std::isfinite(Ts)) {
    throw std::invalid_argument("system_matrices: non-finite input");
  }

  const double v2 = v * v;
  const double Ts2 = Ts * Ts;
  const double Ts3 = Ts2 * Ts;
  const double Ts4 = Ts3 * Ts;

  SystemMatrices m;
  m.A << 1.0, v * Ts, 0.5 * v2 * Ts2, v2 * Ts3 / 6.0,
    0.0, 1.0, v * Ts, 0.5 * v * Ts2,
    0.0, 0.0, 1.0, Ts,
    0.0, 0.0, 0.0, 1.0;
  m.B << v2 * Ts4 / 24.0, v * Ts3 / 6.0, 0.5 * Ts2, Ts;
  m.E << -v * Ts, 0.0, 0.0, 0.0;
  return m;
}

LateralState step(const LateralState & x, double u, double z, double v, double Ts)
{
  if (!std::isfinite(x.d) || !std::isfinite(x.theta) || !std::isfinite(x.kappa) ||
    !std::isfinite(x.kappa_dot) || !std::isfinite(u) || !std::isfinite(z))
  {
    throw std::invalid_argument("step: non-finite input");
  }
  const SystemMatrices m = system_matrices(v, Ts);
  return LateralState::from_vec(m.A * x.vec() + m.B * u + m.E * z);
}

}  // namespace lanetune
