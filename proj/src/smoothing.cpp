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

#include "lanetune/smoothing.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "lanetune/common.hpp"

namespace lanetune
{

std::vector<double> kalman_rts_smooth(
  const std::vector<double> & kappa, double Ts, double q_process, double r_meas)
{
  const std::size_t n = kappa.size();
  if (n < 3) {
    throw std::invalid_argument("kalman_rts_smooth: need at least 3 samples");
  }
  if (!(Ts > 0.0) || !(q_process > 0.0) || !(r_meas > 0.0)) {
    throw std::invalid_argument("kalman_rts_smooth: noise parameters and Ts must be positive");
  }

  using Mat2 = Eigen::Matrix2d;
  using Vec2 = Eigen::Vector2d;

  Mat2 F;
  F << 1.0, Ts, 0.0, 1.0;
  // white-noise acceleration on the rate, integrated over one step
  Mat2 Q;
  Q << Ts * Ts * Ts / 3.0, Ts * Ts / 2.0, Ts * Ts / 2.0, Ts;
  Q *= q_process;
  const Eigen::RowVector2d Hm(1.0, 0.0);

  std::vector<Vec2> x_filt(n), x_pred(n);
  std::vector<Mat2> P_filt(n), P_pred(n);

  Vec2 x(kappa[0], (kappa[1] - kappa[0]) / Ts);
  Mat2 P = Mat2::Identity() * 1e3;
  x_pred[0] = x;
  P_pred[0] = P;

  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) {
      x = F * x;
      P = F * P * F.transpose() + Q;
      x_pred[k] = x;
      P_pred[k] = P;
    }
    const double innov = kappa[k] - Hm * x;
    const double s_cov = (Hm * P * Hm.transpose())(0) + r_meas;
    const Vec2 gain = P * Hm.transpose() / s_cov;
    x += gain * innov;
    P = (Mat2::Identity() - gain * Hm) * P;
    x_filt[k] = x;
    P_filt[k] = P;
  }

  // RTS backward pass
  std::vector<Vec2> x_smooth(n);
  x_smooth[n - 1] = x_filt[n - 1];
  Mat2 P_s = P_filt[n - 1];
  for (std::size_t k = n - 1; k-- > 0; ) {
    const Mat2 C = P_filt[k] * F.transpose() * P_pred[k + 1].inverse();
    x_smooth[k] = x_filt[k] + C * (x_smooth[k + 1] - x_pred[k + 1]);
    P_s = P_filt[k] + C * (P_s - P_pred[k + 1]) * C.transpose();
  }

  std::vector<double> rate(n);
  for (std::size_t k = 0; k < n; ++k) {
    rate[k] = x_smooth[k][1];
  }
  return rate;
}

namespace
{

double lerp_at(
  const std::vector<double> & ts, const std::vector<double> & ys, double t)
{
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  std::size_t hi = static_cast<std::size_t>(std::distance(ts.begin(), it));
  if (hi == 0) {
    return ys.front();
  }
  if (hi >= ts.size()) {
    return ys.back();
  }
  const std::size_t lo = hi - 1;
  const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
  return (1.0 - w) * ys[lo] + w * ys[hi];
}

}  // namespace

Section resample_section(
  const RawDrive & raw, double Ts, const std::string & id, const ResampleConfig & cfg)
{
  const std::size_t n = raw.t.size();
  if (n < 2) {
    throw std::invalid_argument("resample_section: need at least 2 records");
  }
  if (raw.v.size() != n || raw.x.size() != n || raw.y.size() != n ||
    raw.theta.size() != n || raw.kappa.size() != n)
  {
    throw std::invalid_argument("resample_section: channel length mismatch");
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(raw.t[i + 1] > raw.t[i])) {
      throw std::invalid_argument("resample_section: timestamps must be strictly increasing");
    }
    if (raw.t[i + 1] - raw.t[i] > cfg.max_gap) {
      throw std::invalid_argument("resample_section: timestamp gap exceeds the configured threshold");
    }
  }
  if (!(Ts > 0.0)) {
    throw std::invalid_argument("resample_section: Ts must be positive");
  }

  // unwrap heading before interpolating
  std::vector<double> theta_unwrapped(n);
  theta_unwrapped[0] = raw.theta[0];
  for (std::size_t i = 1; i < n; ++i) {
    theta_unwrapped[i] = unwrap_near(theta_unwrapped[i - 1], raw.theta[i]);
  }

  const double t0 = raw.t.front();
  const double t1 = raw.t.back();
  const int m = static_cast<int>(std::floor((t1 - t0) / Ts + 1e-9));
  if (m < 2) {
    throw std::invalid_argument("resample_section: drive shorter than two sample steps");
  }

  std::vector<double> rt(static_cast<std::size_t>(m) + 1);
  std::vector<double> rv(rt.size()), rx(rt.size()), ry(rt.size()), rtheta(rt.size()), rkappa(rt.size());
  for (std::size_t j = 0; j < rt.size(); ++j) {
    const double t = t0 + static_cast<double>(j) * Ts;
    rt[j] = t - t0;
    rv[j] = lerp_at(raw.t, raw.v, t);
    rx[j] = lerp_at(raw.t, raw.x, t);
    ry[j] = lerp_at(raw.t, raw.y, t);
    rtheta[j] = lerp_at(raw.t, theta_unwrapped, t);
    rkappa[j] = lerp_at(raw.t, raw.kappa, t);
  }

  const std::vector<double> rate = kalman_rts_smooth(rkappa, Ts, cfg.q_process, cfg.r_meas);

  // arc length accumulated along the driven path
  std::vector<double> rs(rt.size(), 0.0);
  for (std::size_t j = 1; j < rt.size(); ++j) {
    const double dx = rx[j] - rx[j - 1];
    const double dy = ry[j] - ry[j - 1];
    rs[j] = rs[j - 1] + std::hypot(dx, dy);
  }

  std::vector<CurveNode> nodes(rt.size());
  for (std::size_t j = 0; j < rt.size(); ++j) {
    nodes[j] = {rs[j], rx[j], ry[j], rtheta[j], rkappa[j], rate[j]};
  }
  Curve true_curve(nodes);

  Section sec;
  sec.id = id;
  sec.sample_time = Ts;
  sec.true_curve = true_curve;
  sec.x0 = {0.0, rtheta[0], rkappa[0], rate[0]};
  for (std::size_t j = 0; j < rt.size(); ++j) {
    sec.profile.push_back({rt[j], rv[j], rs[j]});
  }

  // estimate windows are cut from the true curve (noise-free ingestion)
  for (std::size_t j = 0; j + 1 < rt.size(); ++j) {
    const double lo = std::max(true_curve.s_min(), rs[j] - cfg.back_extent);
    const double hi = std::min(true_curve.s_max(), rs[j] + cfg.lookahead);
    std::vector<CurveNode> window;
    for (const auto & nd : nodes) {
      if (nd.s >= lo - 1e-9 && nd.s <= hi + 1e-9) {
        window.push_back(nd);
      }
    }
    if (window.size() < 2) {
      throw std::invalid_argument("resample_section: estimate window too short");
    }
    sec.estimates.emplace_back(std::move(window));
  }

  sec.validate();
  return sec;
}

}  // namespace lanetune
