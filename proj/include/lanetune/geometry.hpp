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

#ifndef LANETUNE__GEOMETRY_HPP_
#define LANETUNE__GEOMETRY_HPP_

#include <Eigen/Core>

#include <vector>

namespace lanetune
{

/// One sample of an arc-length-parametrized reference curve.
/// kappa_dot is the curvature rate as a time series aligned with the grid
/// (d kappa / dt for the longitudinal profile the curve was built for).
struct CurveNode
{
  double s = 0.0;
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double kappa = 0.0;
  double kappa_dot = 0.0;
};

/// Interpolated frame at an arc-length position. Heading is wrapped
/// into (-pi, pi].
struct CurveFrame
{
  Eigen::Vector2d point;
  double theta_r = 0.0;
  double kappa_r = 0.0;
  double kappa_dot_r = 0.0;
};

/// Result of projecting a point onto the curve: foot arc length and signed
/// lateral offset, positive when the point lies left of the local tangent.
struct Projection
{
  double s = 0.0;
  double d_signed = 0.0;
};

/// Sampled planar curve with per-node heading, curvature and curvature rate.
///
/// Position and heading are interpolated with C1 cubic Hermite segments
/// whose position tangents are (cos theta, sin theta) and whose heading
/// slope is kappa, which keeps xy and theta mutually consistent between
/// nodes. Curvature fields are interpolated linearly.
///
/// Curves are immutable after construction; all queries are const and safe
/// to call concurrently.
class Curve
{
public:
  /// Validates and stores the node table. Throws std::invalid_argument on
  /// fewer than 2 nodes, non-monotone s, non-finite values, adjacent heading
  /// jumps of pi/2 or more, or xy inconsistent with the stored headings.
  explicit Curve(std::vector<CurveNode> nodes);

  /// Interpolated frame at arc length s in [s_min, s_max].
  /// Throws std::out_of_range outside the grid (no clamping).
  CurveFrame sample_at(double s) const;

  /// Orthogonal projection of p onto the curve. The returned foot satisfies
  /// |tangent . (p - r(s))| <= 1e-9 m. Throws NumericalError when the point
  /// is farther than `corridor` from the curve, when no interior orthogonal
  /// foot exists, or when two equidistant minima are found (symmetric input).
  Projection project_point(const Eigen::Vector2d & p, double corridor = 20.0) const;

  double s_min() const {return nodes_.front().s;}
  double s_max() const {return nodes_.back().s;}
  std::size_t size() const {return nodes_.size();}
  const std::vector<CurveNode> & nodes() const {return nodes_;}

  /// Position and its first derivative w.r.t. s (used by the projection).
  void eval_segment(
    std::size_t seg, double s, Eigen::Vector2d & p,
    Eigen::Vector2d & dp) const;

private:
  std::size_t segment_index(double s) const;

  std::vector<CurveNode> nodes_;
};

/// Convenience wrappers mirroring the free-function style used elsewhere.
Curve build_curve(std::vector<CurveNode> nodes);
CurveFrame sample_at(const Curve & c, double s);
Projection project_point(const Curve & c, const Eigen::Vector2d & p, double corridor = 20.0);

}  // namespace lanetune

#endif  // LANETUNE__GEOMETRY_HPP_
