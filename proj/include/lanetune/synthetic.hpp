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

#ifndef LANETUNE__SYNTHETIC_HPP_
#define LANETUNE__SYNTHETIC_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lanetune/dataset.hpp"
#include "lanetune/planner.hpp"

namespace lanetune
{

/// Road layout parameters: roads are sequences of straights, circular arcs
/// and linear curvature transitions, sampled at node_spacing.
struct RoadConfig
{
  double node_spacing = 1.0;     // [m]
  double min_radius = 80.0;      // [m]
  double max_radius = 600.0;     // [m]
  double straight_min = 30.0;    // [m]
  double straight_max = 200.0;   // [m]
  double arc_min = 40.0;         // [m]
  double arc_max = 160.0;        // [m]
  double transition_min = 25.0;  // [m]
  double transition_max = 60.0;  // [m]
  double max_heading = 2.2;      // [rad], cumulative heading stays within +-this
};

/// Perception-error model for the per-step estimated lane center: a lateral
/// offset field plus a heading-error field, both smooth along arc length
/// (correlation_length) and mean-reverting over time (correlation_time,
/// Ornstein-Uhlenbeck). The heading error integrates into a lateral error
/// that grows with lookahead distance and vanishes at the vehicle.
struct NoiseConfig
{
  double lateral_sigma = 0.15;       // [m]
  double heading_sigma = 0.002;      // [rad]
  double correlation_time = 2.0;     // [s]
  double correlation_length = 30.0;  // [m]
  double lookahead = 100.0;          // [m], forward extent of each estimate
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct GeneratorConfig
{
  RoadConfig road;
  NoiseConfig noise;
  int n_sections = 12;
  double duration_min = 15.0;  // [s]
  double duration_max = 40.0;  // [s]
  double speed_min = 11.0;     // [m/s]
  double speed_max = 22.0;     // [m/s]
  double sample_time = 0.1;    // [s]
  int horizon = 30;            // steps; used to verify estimate coverage
  double back_extent = 10.0;   // [m], estimate extent behind the vehicle
  std::uint64_t rng_seed = 1;

  void validate() const;
};

/// One synthetic section with its own road, profile and noise realization,
/// fully determined by (cfg, seed).
Section generate_section(const GeneratorConfig & cfg, std::uint64_t seed, const std::string & id);

/// Synthetic dataset generation. Sections use per-section seeds derived from
/// cfg.rng_seed, so the result is identical for any worker count; workers > 1
/// generates sections in parallel (OpenMP).
Dataset generate_synthetic_dataset(const GeneratorConfig & cfg, int workers = 1);

/// Serial reference of generate_synthetic_dataset (kept for tests and the
/// benchmark; must produce bitwise-identical output).
Dataset generate_synthetic_dataset_serial(const GeneratorConfig & cfg);

/// Multiplies a neutral weight set entrywise by the given factors.
DesiredCostParams apply_factors(
  const DesiredCostParams & neutral, const std::array<double, 5> & factors);

/// Draws n desired-cost sets as neutral x log-uniform factors in [0.25, 4].
std::vector<DesiredCostParams> random_dcfp(
  const DesiredCostParams & neutral, std::uint64_t rng_seed, int n_sets);

}  // namespace lanetune

#endif  // LANETUNE__SYNTHETIC_HPP_
