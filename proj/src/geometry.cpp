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

#include "lanetune/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lanetune/common.hpp"

namespace lanetune
{

namespace
{

struct HermiteBasis
{
  double h00, h10, h01, h11;      // value basis
  double d00, d10, d01, d11;      // derivative basis (w.r.t. t)
};

HermiteBasis hermite(double t)
{
  const double t2 = t * t;
  const double t3 = t2 * t;
  HermiteBasis b;
  b.h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  b.h10 = t3 - 2.0 * t2 + t;
  b.h01 = -2.0 * t3 + 3.0 * t2;
  b.h11 = t3 - t2;
  b.d00 = 6.0 * t2 - 6.0 * t;
  b.d10 = 3.0 * t2 - 4.0 * t + 1.0;
  b.d01 = -6.0 * t2 + 6.0 * t;
  b.d11 = 3.0 * t2 - 2.0 * t;
  return b;
}

double interp_theta(const CurveNode & a, const CurveNode & b, double h, double t)
{
  const HermiteBasis hb = hermite(t);
  return hb.h00 * a.theta + hb.h10 * h * a.kappa + hb.h01 * b.theta + hb.h11 * h * b.kappa;
}

}  // namespace

Curve::Curve(std::vector<CurveNode> nodes)
: nodes_(std::move(nodes))
{
  if (nodes_.size() < 2) {
    throw std::invalid_argument("Curve: need at least 2 nodes");
  }
  for (const auto & n : nodes_) {
    if (!std::isfinite(n.s) || !std::isfinite(n.x) || !std::isfinite(n.y) ||
      !std::isfinite(n.theta) || !std::isfinite(n.kappa) || !std::isfinite(n.kappa_dot))
    {
      throw std::invalid_argument("Curve: non-finite node value");
    }
  }
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    const CurveNode & a = nodes_[i];
    const CurveNode & b = nodes_[i + 1];
    if (!(b.s > a.s)) {
      throw std::invalid_argument("Curve: arc length must be strictly increasing");
    }
    if (std::abs(b.theta - a.theta) >= M_PI / 2.0) {
      throw std::invalid_argument("Curve: heading jump of pi/2 or more between adjacent nodes");
    }
  }

  // Heading/position consistency: the chord of every segment must match the
  // displacement obtained by integrating the interpolated heading direction.
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    const CurveNode & a = nodes_[i];
    const CurveNode & b = nodes_[i + 1];
    const double h = b.s - a.s;
    // composite Simpson with 4 intervals
    static constexpr double kT[5] = {0.0, 0.25, 0.5, 0.75, 1.0};
    static constexpr double kW[5] = {1.0 / 12, 4.0 / 12, 2.0 / 12, 4.0 / 12, 1.0 / 12};
    Eigen::Vector2d integrated = Eigen::Vector2d::Zero();
    for (int q = 0; q < 5; ++q) {
      const double th = interp_theta(a, b, h, kT[q]);
      integrated += kW[q] * Eigen::Vector2d(std::cos(th), std::sin(th));
    }
    integrated *= h;
    const Eigen::Vector2d chord(b.x - a.x, b.y - a.y);
    const double tol = 0.03 * h + 1e-3;
    if ((chord - integrated).norm() > tol) {
      throw std::invalid_argument("Curve: xy inconsistent with stored headings");
    }
  }
}

std::size_t Curve::segment_index(double s) const
{
  // index of the segment [s_i, s_{i+1}] containing s; assumes s in range
  const auto it = std::upper_bound(
    nodes_.begin(), nodes_.end(), s,
    [](double value, const CurveNode & n) {return value < n.s;});
  std::size_t i = static_cast<std::size_t>(std::distance(nodes_.begin(), it));
  if (i == 0) {
    return 0;
  }
  if (i >= nodes_.size()) {
    return nodes_.size() - 2;
  }
  return i - 1;
}

CurveFrame Curve::sample_at(double s) const
{
  if (!(s >= s_min() && s <= s_max())) {
    throw std::out_of_range("Curve::sample_at: arc length outside the sampled range");
  }
  const std::size_t i = segment_index(s);
  const CurveNode & a = nodes_[i];
  const CurveNode & b = nodes_[i + 1];
  const double h = b.s - a.s;
  const double t = (s - a.s) / h;
  const HermiteBasis hb = hermite(t);

  const Eigen::Vector2d p0(a.x, a.y);
  const Eigen::Vector2d p1(b.x, b.y);
  const Eigen::Vector2d m0(std::cos(a.theta), std::sin(a.theta));
  const Eigen::Vector2d m1(std::cos(b.theta), std::sin(b.theta));

  CurveFrame f;
  f.point = hb.h00 * p0 + hb.h10 * h * m0 + hb.h01 * p1 + hb.h11 * h * m1;
  f.theta_r = wrap_angle(
    hb.h00 * a.theta + hb.h10 * h * a.kappa + hb.h01 * b.theta + hb.h11 * h * b.kappa);
  f.kappa_r = (1.0 - t) * a.kappa + t * b.kappa;
  f.kappa_dot_r = (1.0 - t) * a.kappa_dot + t * b.kappa_dot;
  return f;
}

void Curve::eval_segment(
  std::size_t seg, double s, Eigen::Vector2d & p, Eigen::Vector2d & dp) const
{
  const CurveNode & a = nodes_[seg];
  const CurveNode & b = nodes_[seg + 1];
  const double h = b.s - a.s;
  const double t = (s - a.s) / h;
  const HermiteBasis hb = hermite(t);

  const Eigen::Vector2d p0(a.x, a.y);
  const Eigen::Vector2d p1(b.x, b.y);
  const Eigen::Vector2d m0(std::cos(a.theta), std::sin(a.theta));
  const Eigen::Vector2d m1(std::cos(b.theta), std::sin(b.theta));

  p = hb.h00 * p0 + hb.h10 * h * m0 + hb.h01 * p1 + hb.h11 * h * m1;
  dp = (hb.d00 * p0 + hb.d10 * h * m0 + hb.d01 * p1 + hb.d11 * h * m1) / h;
}

Projection Curve::project_point(const Eigen::Vector2d & p, double corridor) const
{
  // g(s) = (p - r(s)) . r'(s); a distance minimum is a +/- sign change of g.
  const auto g_at = [&](std::size_t seg, double s) {
      Eigen::Vector2d r, dr;
      eval_segment(seg, s, r, dr);
      return (p - r).dot(dr);
    };

  struct Root
  {
    double s;
    double dist;
  };
  std::vector<Root> roots;

  const std::size_t nseg = nodes_.size() - 1;
  double g_prev = g_at(0, nodes_[0].s);

  // orthogonal foot exactly at the start
  if (std::abs(g_prev) < 1e-12 * (1.0 + p.norm())) {
    Eigen::Vector2d r, dr;
    eval_segment(0, nodes_[0].s, r, dr);
    roots.push_back({nodes_[0].s, (p - r).norm()});
  }

  for (std::size_t seg = 0; seg < nseg; ++seg) {
    const double s_lo = nodes_[seg].s;
    const double s_hi = nodes_[seg + 1].s;
    const double g_hi = g_at(seg, s_hi);
    if (g_prev >= 0.0 && g_hi <= 0.0) {
      double lo = s_lo, hi = s_hi;
      double glo = g_prev;
      for (int it = 0; it < 80 && hi - lo > 1e-14 * (1.0 + std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g_at(seg, mid);
        if ((glo >= 0.0) == (gm >= 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      const double s_star = 0.5 * (lo + hi);
      Eigen::Vector2d r, dr;
      eval_segment(seg, s_star, r, dr);
      roots.push_back({s_star, (p - r).norm()});
    }
    g_prev = g_hi;
  }

  // orthogonal foot exactly at the end
  if (std::abs(g_prev) < 1e-12 * (1.0 + p.norm()) &&
    (roots.empty() || std::abs(roots.back().s - s_max()) > 1e-9))
  {
    Eigen::Vector2d r, dr;
    eval_segment(nseg - 1, s_max(), r, dr);
    roots.push_back({s_max(), (p - r).norm()});
  }

  if (roots.empty()) {
    throw NumericalError("project_point: no orthogonal projection within the curve range");
  }

  std::sort(roots.begin(), roots.end(), [](const Root & a, const Root & b) {return a.dist < b.dist;});
  const Root best = roots.front();

  if (roots.size() > 1) {
    const Root & second = roots[1];
    const bool equidistant = std::abs(second.dist - best.dist) <= 1e-9 * std::max(1.0, best.dist);
    const bool distinct = std::abs(second.s - best.s) > 1e-6 * (s_max() - s_min());
    if (equidistant && distinct) {
      throw NumericalError("project_point: ambiguous projection (equidistant minima)");
    }
  }

  if (best.dist > corridor) {
    throw NumericalError("project_point: point outside the projection corridor");
  }

  Eigen::Vector2d r, dr;
  eval_segment(best.s >= s_max() ? nseg - 1 : segment_index(best.s), best.s, r, dr);
  const Eigen::Vector2d diff = p - r;
  // left normal of the tangent direction fixes the sign convention
  const Eigen::Vector2d tangent = dr.normalized();
  const double d_signed = -tangent.y() * diff.x() + tangent.x() * diff.y();
  return {best.s, d_signed};
}

Curve build_curve(std::vector<CurveNode> nodes)
{
  return Curve(std::move(nodes));
}

CurveFrame sample_at(const Curve & c, double s)
{
  return c.sample_at(s);
}

Projection project_point(const Curve & c, const Eigen::Vector2d & p, double corridor)
{
  return c.project_point(p, corridor);
}

}  // namespace lanetune
