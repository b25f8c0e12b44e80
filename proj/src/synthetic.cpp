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

#include "lanetune/synthetic.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lanetune/common.hpp"

namespace lanetune
{

void NoiseConfig::validate() const
{
  if (!(lateral_sigma >= 0.0) || !(heading_sigma >= 0.0)) {
    throw std::invalid_argument("NoiseConfig: sigmas must be nonnegative");
  }
  if (!(correlation_time > 0.0) || !(correlation_length > 0.0) || !(lookahead > 0.0)) {
    throw std::invalid_argument("NoiseConfig: correlation scales and lookahead must be positive");
  }
}

void GeneratorConfig::validate() const
{
  noise.validate();
  if (n_sections < 1) {
    throw std::invalid_argument("GeneratorConfig: n_sections must be >= 1");
  }
  if (!(duration_min > 0.0) || !(duration_max >= duration_min)) {
    throw std::invalid_argument("GeneratorConfig: invalid duration range");
  }
  if (!(speed_min > 0.0) || !(speed_max >= speed_min)) {
    throw std::invalid_argument("GeneratorConfig: invalid speed range");
  }
  if (!(sample_time > 0.0) || horizon < 1) {
    throw std::invalid_argument("GeneratorConfig: invalid sample_time or horizon");
  }
  if (!(road.min_radius > 0.0) || road.max_radius < road.min_radius) {
    throw std::invalid_argument("GeneratorConfig: invalid radius range");
  }
  if (!(road.node_spacing > 0.0) || road.node_spacing > 1.0) {
    throw std::invalid_argument("GeneratorConfig: node spacing must be in (0, 1] m");
  }
  // every estimate must cover the full planning horizon ahead of the vehicle
  const double horizon_dist = horizon * sample_time * speed_max;
  if (noise.lookahead < horizon_dist + 5.0) {
    throw std::invalid_argument(
      "GeneratorConfig: lookahead too short for the planning horizon at top speed");
  }
}

namespace
{

// ---------------------------------------------------------------------------
// road layout: piecewise-linear curvature over arc length

struct RoadPiece
{
  double s0 = 0.0;      // start arc length
  double length = 0.0;
  double kappa0 = 0.0;
  double kappa1 = 0.0;

  double kappa_at(double s) const
  {
    const double t = (s - s0) / length;
    return kappa0 + (kappa1 - kappa0) * t;
  }

  double dkappa_ds() const {return (kappa1 - kappa0) / length;}
};

struct RoadLayout
{
  std::vector<RoadPiece> pieces;
  double total = 0.0;

  void add(double length, double kappa0, double kappa1)
  {
    pieces.push_back({total, length, kappa0, kappa1});
    total += length;
  }

  const RoadPiece & piece_at(double s) const
  {
    for (const auto & p : pieces) {
      if (s <= p.s0 + p.length) {
        return p;
      }
    }
    return pieces.back();
  }

  // heading from integrating the piecewise-linear curvature analytically
  double heading_at(double s) const
  {
    double theta = 0.0;
    for (const auto & p : pieces) {
      const double u = std::clamp(s - p.s0, 0.0, p.length);
      if (u <= 0.0) {
        break;
      }
      theta += p.kappa0 * u + 0.5 * p.dkappa_ds() * u * u;
    }
    return theta;
  }
};

RoadLayout make_road_layout(Rng & rng, const RoadConfig & cfg, double needed_length)
{
  RoadLayout road;
  road.add(rng.uniform(cfg.straight_min, cfg.straight_max), 0.0, 0.0);
  double heading_budget_used = 0.0;
  while (road.total < needed_length) {
    const double radius = rng.log_uniform(cfg.min_radius, cfg.max_radius);
    double kappa = 1.0 / radius;
    if (rng.uniform() < 0.5) {
      kappa = -kappa;
    }
    const double t_in = rng.uniform(cfg.transition_min, cfg.transition_max);
    const double arc = rng.uniform(cfg.arc_min, cfg.arc_max);
    const double t_out = rng.uniform(cfg.transition_min, cfg.transition_max);
    const double turn = kappa * (arc + 0.5 * (t_in + t_out));
    if (std::abs(heading_budget_used + turn) > cfg.max_heading) {
      kappa = -kappa;
    }
    heading_budget_used += kappa * (arc + 0.5 * (t_in + t_out));
    road.add(t_in, 0.0, kappa);
    road.add(arc, kappa, kappa);
    road.add(t_out, kappa, 0.0);
    road.add(rng.uniform(cfg.straight_min, cfg.straight_max), 0.0, 0.0);
  }
  return road;
}

// Sampled road nodes; xy integrated with Simpson over the analytic heading.
std::vector<CurveNode> sample_road(const RoadLayout & road, double spacing, double length)
{
  std::vector<double> grid;
  for (double s = 0.0; s < length; s += spacing) {
    grid.push_back(s);
  }
  grid.push_back(length);

  std::vector<CurveNode> nodes;
  nodes.reserve(grid.size());
  double x = 0.0, y = 0.0;
  double s_prev = 0.0;
  for (double s : grid) {
    if (s > s_prev) {
      const int nsub = std::max(1, static_cast<int>(std::ceil((s - s_prev) / 0.25)));
      const double h = (s - s_prev) / nsub;
      for (int i = 0; i < nsub; ++i) {
        const double a = s_prev + i * h;
        const double t0 = road.heading_at(a);
        const double t1 = road.heading_at(a + 0.5 * h);
        const double t2 = road.heading_at(a + h);
        x += h / 6.0 * (std::cos(t0) + 4.0 * std::cos(t1) + std::cos(t2));
        y += h / 6.0 * (std::sin(t0) + 4.0 * std::sin(t1) + std::sin(t2));
      }
      s_prev = s;
    }
    const RoadPiece & piece = road.piece_at(s);
    CurveNode n;
    n.s = s;
    n.x = x;
    n.y = y;
    n.theta = road.heading_at(s);
    n.kappa = piece.kappa_at(s);
    n.kappa_dot = piece.dkappa_ds();  // scaled by the local speed later
    nodes.push_back(n);
  }
  return nodes;
}

// ---------------------------------------------------------------------------
// smooth random fields: independent OU processes on a uniform control grid,
// Catmull-Rom interpolated along arc length

struct ControlField
{
  double s0 = 0.0;
  double spacing = 1.0;
  std::vector<double> values;

  double eval(double s) const
  {
    double v, dv;
    eval(s, v, dv);
    return v;
  }

  void eval(double s, double & value, double & deriv) const
  {
    const double u = (s - s0) / spacing;
    const auto i = static_cast<std::ptrdiff_t>(std::floor(u));
    const auto n = static_cast<std::ptrdiff_t>(values.size());
    const auto clampi = [&](std::ptrdiff_t k) {
        return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(k, 0, n - 1));
      };
    const double p0 = values[clampi(i - 1)];
    const double p1 = values[clampi(i)];
    const double p2 = values[clampi(i + 1)];
    const double p3 = values[clampi(i + 2)];
    const double t = u - std::floor(u);
    const double t2 = t * t;
    const double t3 = t2 * t;
    value = 0.5 *
      (2.0 * p1 + (-p0 + p2) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t2 +
      (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t3);
    deriv = 0.5 *
      ((-p0 + p2) + 2.0 * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t +
      3.0 * (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t2) / spacing;
  }
};

double lerp_profile(
  const std::vector<double> & xs, const std::vector<double> & ys, double x)
{
  if (x <= xs.front()) {
    return ys.front();
  }
  if (x >= xs.back()) {
    return ys.back();
  }
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t hi = static_cast<std::size_t>(std::distance(xs.begin(), it));
  const std::size_t lo = hi - 1;
  const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return (1.0 - w) * ys[lo] + w * ys[hi];
}

}  // namespace

Section generate_section(const GeneratorConfig & cfg, std::uint64_t seed, const std::string & id)
{
  cfg.validate();
  Rng rng_profile(derive_seed(seed, 1));
  Rng rng_road(derive_seed(seed, 2));
  Rng rng_noise(derive_seed(seed, 3));

  const double Ts = cfg.sample_time;
  const double duration = rng_profile.uniform(cfg.duration_min, cfg.duration_max);
  const int steps = std::max(2, static_cast<int>(std::llround(duration / Ts)));

  // smoothly varying speed, mean-reverting around a per-section target
  const double v_target = rng_profile.uniform(cfg.speed_min, cfg.speed_max);
  const double rho_v = std::exp(-Ts / 15.0);
  const double sigma_v = 0.6;
  const double max_accel = 1.2;
  std::vector<double> v(static_cast<std::size_t>(steps) + 1);
  v[0] = std::clamp(v_target * rng_profile.uniform(0.95, 1.05), cfg.speed_min, cfg.speed_max);
  for (int j = 0; j < steps; ++j) {
    double next = v[static_cast<std::size_t>(j)] +
      (1.0 - rho_v) * (v_target - v[static_cast<std::size_t>(j)]) +
      sigma_v * std::sqrt(1.0 - rho_v * rho_v) * rng_profile.normal();
    next = std::clamp(next, v[static_cast<std::size_t>(j)] - max_accel * Ts,
        v[static_cast<std::size_t>(j)] + max_accel * Ts);
    v[static_cast<std::size_t>(j) + 1] = std::clamp(next, cfg.speed_min, cfg.speed_max);
  }

  const double s_start = cfg.back_extent + 5.0;
  std::vector<double> s(static_cast<std::size_t>(steps) + 1);
  s[0] = s_start;
  for (int j = 0; j < steps; ++j) {
    s[static_cast<std::size_t>(j) + 1] = s[static_cast<std::size_t>(j)] +
      v[static_cast<std::size_t>(j)] * Ts;
  }
  const double road_length = s.back() + cfg.noise.lookahead + 10.0;

  const RoadLayout layout = make_road_layout(rng_road, cfg.road, road_length);
  std::vector<CurveNode> nodes = sample_road(layout, cfg.road.node_spacing, road_length);

  // curvature rate as a time series: d kappa/dt = v(s) * d kappa/ds
  for (auto & n : nodes) {
    n.kappa_dot *= lerp_profile(s, v, n.s);
  }
  const Curve true_curve(nodes);

  Section sec;
  sec.id = id;
  sec.sample_time = Ts;
  sec.true_curve = true_curve;
  const CurveFrame f0 = true_curve.sample_at(s_start);
  sec.x0 = {0.0, f0.theta_r, f0.kappa_r, f0.kappa_dot_r};
  for (int j = 0; j <= steps; ++j) {
    sec.profile.push_back(
      {j * Ts, v[static_cast<std::size_t>(j)], s[static_cast<std::size_t>(j)]});
  }

  // perception error fields on a shared control grid
  const double ell = cfg.noise.correlation_length;
  ControlField lat_field, head_field;
  lat_field.s0 = -2.0 * ell;
  lat_field.spacing = ell;
  const auto n_ctrl = static_cast<std::size_t>(std::ceil((road_length + 4.0 * ell) / ell)) + 1;
  lat_field.values.resize(n_ctrl);
  head_field = lat_field;
  for (std::size_t i = 0; i < n_ctrl; ++i) {
    lat_field.values[i] = cfg.noise.lateral_sigma * rng_noise.normal();
    head_field.values[i] = cfg.noise.heading_sigma * rng_noise.normal();
  }
  const double rho_t = std::exp(-Ts / cfg.noise.correlation_time);
  const double refresh = std::sqrt(1.0 - rho_t * rho_t);

  sec.estimates.reserve(static_cast<std::size_t>(steps));
  const auto & tn = true_curve.nodes();
  for (int j = 0; j < steps; ++j) {
    const double s_veh = s[static_cast<std::size_t>(j)];
    const double lo = std::max(true_curve.s_min(), s_veh - cfg.back_extent);
    const double hi = std::min(true_curve.s_max(), s_veh + cfg.noise.lookahead);

    std::vector<const CurveNode *> window;
    for (const auto & n : tn) {
      if (n.s >= lo - 1e-9 && n.s <= hi + 1e-9) {
        window.push_back(&n);
      }
    }

    // lateral error = lateral field + integrated heading error, anchored so
    // the heading contribution vanishes at the vehicle position
    const std::size_t wn = window.size();
    std::vector<double> eps(wn), deps(wn), head_int(wn);
    double acc = 0.0;
    double prev_b = 0.0;
    for (std::size_t i = 0; i < wn; ++i) {
      double a, da, b, db;
      lat_field.eval(window[i]->s, a, da);
      head_field.eval(window[i]->s, b, db);
      if (i > 0) {
        acc += 0.5 * (prev_b + b) * (window[i]->s - window[i - 1]->s);
      }
      head_int[i] = acc;
      eps[i] = a;
      deps[i] = da + b;
      prev_b = b;
    }
    // shift the integral so it is zero at the vehicle arc position
    double int_at_veh = head_int[0];
    for (std::size_t i = 0; i + 1 < wn; ++i) {
      if (window[i + 1]->s >= s_veh) {
        const double w = (s_veh - window[i]->s) / (window[i + 1]->s - window[i]->s);
        int_at_veh = (1.0 - w) * head_int[i] + w * head_int[i + 1];
        break;
      }
    }
    for (std::size_t i = 0; i < wn; ++i) {
      eps[i] += head_int[i] - int_at_veh;
    }

    std::vector<CurveNode> est_nodes(wn);
    for (std::size_t i = 0; i < wn; ++i) {
      const CurveNode & n = *window[i];
      est_nodes[i].x = n.x - std::sin(n.theta) * eps[i];
      est_nodes[i].y = n.y + std::cos(n.theta) * eps[i];
      est_nodes[i].theta = n.theta + std::atan2(deps[i], 1.0 - n.kappa * eps[i]);
    }
    est_nodes[0].s = window[0]->s;
    for (std::size_t i = 1; i < wn; ++i) {
      est_nodes[i].s = est_nodes[i - 1].s +
        std::hypot(est_nodes[i].x - est_nodes[i - 1].x, est_nodes[i].y - est_nodes[i - 1].y);
    }
    for (std::size_t i = 0; i < wn; ++i) {
      const std::size_t il = i > 0 ? i - 1 : i;
      const std::size_t ih = i + 1 < wn ? i + 1 : i;
      est_nodes[i].kappa = (est_nodes[ih].theta - est_nodes[il].theta) /
        (est_nodes[ih].s - est_nodes[il].s);
    }
    for (std::size_t i = 0; i < wn; ++i) {
      const std::size_t il = i > 0 ? i - 1 : i;
      const std::size_t ih = i + 1 < wn ? i + 1 : i;
      const double dk_ds = (est_nodes[ih].kappa - est_nodes[il].kappa) /
        (est_nodes[ih].s - est_nodes[il].s);
      est_nodes[i].kappa_dot = dk_ds * lerp_profile(s, v, est_nodes[i].s);
    }
    sec.estimates.emplace_back(std::move(est_nodes));

    // evolve the error fields to the next time step
    for (std::size_t i = 0; i < n_ctrl; ++i) {
      lat_field.values[i] = rho_t * lat_field.values[i] +
        refresh * cfg.noise.lateral_sigma * rng_noise.normal();
      head_field.values[i] = rho_t * head_field.values[i] +
        refresh * cfg.noise.heading_sigma * rng_noise.normal();
    }
  }

  sec.validate();
  return sec;
}

namespace
{

nlohmann::ordered_json generator_meta(const GeneratorConfig & cfg)
{
  nlohmann::ordered_json j;
  j["seed"] = cfg.rng_seed;
  j["n_sections"] = cfg.n_sections;
  j["duration_range"] = {cfg.duration_min, cfg.duration_max};
  j["speed_range"] = {cfg.speed_min, cfg.speed_max};
  j["noise"] = {
    {"lateral_sigma", cfg.noise.lateral_sigma},
    {"heading_sigma", cfg.noise.heading_sigma},
    {"correlation_time", cfg.noise.correlation_time},
    {"correlation_length", cfg.noise.correlation_length},
    {"lookahead", cfg.noise.lookahead}};
  j["road"] = {
    {"min_radius", cfg.road.min_radius},
    {"max_radius", cfg.road.max_radius},
    {"max_heading", cfg.road.max_heading}};
  return j;
}

std::string section_id(int index)
{
  char buf[16];
  std::snprintf(buf, sizeof(buf), "sec-%04d", index);
  return buf;
}

}  // namespace

Dataset generate_synthetic_dataset_serial(const GeneratorConfig & cfg)
{
  cfg.validate();
  Dataset ds;
  ds.sample_time = cfg.sample_time;
  ds.sections.resize(static_cast<std::size_t>(cfg.n_sections));
  for (int i = 0; i < cfg.n_sections; ++i) {
    ds.sections[static_cast<std::size_t>(i)] =
      generate_section(cfg, derive_seed(cfg.rng_seed, 100, static_cast<std::uint64_t>(i)), section_id(i));
  }
  ds.meta["generator"] = generator_meta(cfg);
  ds.validate();
  return ds;
}

Dataset generate_synthetic_dataset(const GeneratorConfig & cfg, int workers)
{
  if (workers <= 1) {
    return generate_synthetic_dataset_serial(cfg);
  }
  cfg.validate();
  Dataset ds;
  ds.sample_time = cfg.sample_time;
  ds.sections.resize(static_cast<std::size_t>(cfg.n_sections));
  std::exception_ptr error;
  #pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (int i = 0; i < cfg.n_sections; ++i) {
    try {
      ds.sections[static_cast<std::size_t>(i)] =
        generate_section(cfg, derive_seed(cfg.rng_seed, 100, static_cast<std::uint64_t>(i)), section_id(i));
    } catch (...) {
      #pragma omp critical
      if (!error) {
        error = std::current_exception();
      }
    }
  }
  if (error) {
    std::rethrow_exception(error);
  }
  ds.meta["generator"] = generator_meta(cfg);
  ds.validate();
  return ds;
}

DesiredCostParams apply_factors(
  const DesiredCostParams & neutral, const std::array<double, 5> & factors)
{
  neutral.validate();
  DesiredCostParams out;
  for (std::size_t i = 0; i < 5; ++i) {
    out.psi[i] = neutral.psi[i] * factors[i];
  }
  return out;
}

std::vector<DesiredCostParams> random_dcfp(
  const DesiredCostParams & neutral, std::uint64_t rng_seed, int n_sets)
{
  neutral.validate();
  Rng rng(derive_seed(rng_seed, 0xdcf));
  std::vector<DesiredCostParams> out;
  out.reserve(static_cast<std::size_t>(n_sets));
  for (int k = 0; k < n_sets; ++k) {
    std::array<double, 5> factors{};
    for (auto & f : factors) {
      f = rng.log_uniform(0.25, 4.0);
    }
    out.push_back(apply_factors(neutral, factors));
  }
  return out;
}

}  // namespace lanetune
