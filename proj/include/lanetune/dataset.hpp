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

#ifndef LANETUNE__DATASET_HPP_
#define LANETUNE__DATASET_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lanetune/geometry.hpp"
#include "lanetune/kinematics.hpp"

namespace lanetune
{

/// One row of the longitudinal profile: time, planned velocity, and the
/// vehicle's arc position on the true curve.
struct ProfilePoint
{
  double t = 0.0;
  double v = 0.0;
  double s = 0.0;
};

/// One continuous drive: the true lane center, a per-step estimated lane
/// center (one curve per simulation step), the longitudinal profile and the
/// initial lateral state in the true-curve frame.
///
/// The profile has steps() + 1 rows so the position of the terminal state
/// is explicit; estimates has exactly steps() entries.
struct Section
{
  std::string id;
  double sample_time = 0.1;
  Curve true_curve{{{0, 0, 0, 0, 0, 0}, {1, 1, 0, 0, 0, 0}}};
  std::vector<Curve> estimates;
  std::vector<ProfilePoint> profile;
  LateralState x0;

  int steps() const {return static_cast<int>(estimates.size());}

  double duration() const {return steps() * sample_time;}

  /// Structural invariants: profile length = steps()+1, nondecreasing
  /// positions, positive sample time. Throws std::invalid_argument.
  void validate() const;
};

struct Dataset
{
  double sample_time = 0.1;
  std::vector<Section> sections;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();

  void validate() const;

  /// Indices of the sections whose ids are listed in meta["test_sections"];
  /// empty when the dataset carries no recorded split.
  std::vector<std::size_t> test_indices() const;
};

nlohmann::ordered_json section_to_json(const Section & sec);
Section section_from_json(const nlohmann::ordered_json & j);

nlohmann::ordered_json dataset_to_json(const Dataset & ds);
Dataset dataset_from_json(const nlohmann::ordered_json & j);

/// Canonical JSON file round trip: save followed by load reproduces the
/// dataset bit-for-bit (doubles are serialized with shortest round-trip
/// representation).
void save_dataset(const Dataset & ds, const std::filesystem::path & path);
Dataset load_dataset(const std::filesystem::path & path);

/// Picks a section-level split whose summary statistics (duration-weighted
/// speed mean/std and mean |kappa|) match between train and test, targeting
/// the given test fraction of total duration. Deterministic under seed.
/// Returns the ids assigned to the test split.
std::vector<std::string> plan_split(
  const Dataset & ds, double test_fraction, std::uint64_t rng_seed);

/// Materializes plan_split into two datasets (sections are copied).
std::pair<Dataset, Dataset> split_train_test(
  const Dataset & ds, double test_fraction, std::uint64_t rng_seed);

/// Subset by section id; ids not present are an error.
Dataset subset(const Dataset & ds, const std::vector<std::string> & ids);

}  // namespace lanetune

#endif  // LANETUNE__DATASET_HPP_
