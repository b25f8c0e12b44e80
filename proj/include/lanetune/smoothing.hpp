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

#ifndef LANETUNE__SMOOTHING_HPP_
#define LANETUNE__SMOOTHING_HPP_

#include <string>
#include <vector>

#include "lanetune/dataset.hpp"

namespace lanetune
{

/// Curvature-rate estimation from a sampled curvature series: forward Kalman
/// filter on the constant-rate state [kappa, kappa_dot], followed by a
/// Rauch-Tung-Striebel backward pass. Returns the smoothed kappa_dot series
/// (same length as the input). Requires >= 3 samples and positive noise
/// parameters.
std::vector<double> kalman_rts_smooth(
  const std::vector<double> & kappa, double Ts, double q_process, double r_meas);

/// Recorded drive channels prior to resampling. The xy trace is the driven
/// path (vehicle kept on the lane center), so it doubles as the true curve.
struct RawDrive
{
  std::vector<double> t;      // strictly increasing timestamps [s]
  std::vector<double> v;      // longitudinal speed [m/s]
  std::vector<double> x;      // position [m]
  std::vector<double> y;      // position [m]
  std::vector<double> theta;  // heading [rad], may be wrapped
  std::vector<double> kappa;  // driven curvature [1/m]
};

struct ResampleConfig
{
  double max_gap = 0.5;        // [s], larger timestamp gaps are an error
  double lookahead = 120.0;    // [m], forward extent of the per-step estimate windows
  double back_extent = 10.0;   // [m], estimate window extent behind the vehicle
  double q_process = 1.0;      // curvature-rate smoother process noise
  double r_meas = 1e-6;        // curvature-rate smoother measurement noise
};

/// Linear resampling of a recorded drive onto a uniform Ts grid (heading is
/// unwrapped before interpolation and wrapped after), arc length accumulated
/// from the xy trace, curvature rate estimated with kalman_rts_smooth.
/// The per-step estimates are windows of the true curve (recorded estimate
/// ingestion is out of scope), so the resulting section is noise-free.
Section resample_section(
  const RawDrive & raw, double Ts, const std::string & id, const ResampleConfig & cfg = {});

}  // namespace lanetune

#endif  // LANETUNE__SMOOTHING_HPP_
