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

#include "lanetune/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lanetune/common.hpp"

namespace lanetune
{

void Section::validate() const
{
  if (id.empty()) {
    throw std::invalid_argument("Section: empty id");
  }
  if (!(sample_time > 0.0)) {
    throw std::invalid_argument("Section: sample_time must be positive");
  }
  if (estimates.empty()) {
    throw std::invalid_argument("Section '" + id + "': no estimates");
  }
  if (profile.size() != estimates.size() + 1) {
    throw std::invalid_argument("Section '" + id + "': profile must have steps()+1 rows");
  }
  for (std::size_t j = 0; j + 1 < profile.size(); ++j) {
    if (profile[j + 1].s < profile[j].s) {
      throw std::invalid_argument("Section '" + id + "': profile positions must be nondecreasing");
    }
    if (!(profile[j].v >= 0.0)) {
      throw std::invalid_argument("Section '" + id + "': negative velocity");
    }
  }
  for (const auto & p : profile) {
    if (p.s < true_curve.s_min() || p.s > true_curve.s_max()) {
      throw std::invalid_argument("Section '" + id + "': profile position outside the true curve");
    }
  }
}

void Dataset::validate() const
{
  std::set<std::string> ids;
  for (const auto & sec : sections) {
    sec.validate();
    if (!ids.insert(sec.id).second) {
      throw std::invalid_argument("Dataset: duplicate section id '" + sec.id + "'");
    }
  }
}

std::vector<std::size_t> Dataset::test_indices() const
{
  std::vector<std::size_t> out;
  if (!meta.contains("test_sections")) {
    return out;
  }
  const auto test_ids = meta.at("test_sections").get<std::vector<std::string>>();
  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (std::find(test_ids.begin(), test_ids.end(), sections[i].id) != test_ids.end()) {
      out.push_back(i);
    }
  }
  return out;
}

namespace
{

nlohmann::ordered_json curve_to_json(const Curve & c)
{
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const auto & n : c.nodes()) {
    nodes.push_back({n.s, n.x, n.y, n.theta, n.kappa, n.kappa_dot});
  }
  return nlohmann::ordered_json{{"nodes", std::move(nodes)}};
}

Curve curve_from_json(const nlohmann::ordered_json & j)
{
  std::vector<CurveNode> nodes;
  for (const auto & row : j.at("nodes")) {
    if (row.size() != 6) {
      throw std::invalid_argument("curve node must be [s, x, y, theta, kappa, kappa_dot]");
    }
    nodes.push_back(
      {row[0].get<double>(), row[1].get<double>(), row[2].get<double>(),
        row[3].get<double>(), row[4].get<double>(), row[5].get<double>()});
  }
  return Curve(std::move(nodes));
}

}  // namespace

nlohmann::ordered_json section_to_json(const Section & sec)
{
  nlohmann::ordered_json j;
  j["id"] = sec.id;
  nlohmann::ordered_json profile = nlohmann::ordered_json::array();
  for (const auto & p : sec.profile) {
    profile.push_back({p.t, p.v, p.s});
  }
  j["profile"] = std::move(profile);
  j["x0"] = {sec.x0.d, sec.x0.theta, sec.x0.kappa, sec.x0.kappa_dot};
  j["true_curve"] = curve_to_json(sec.true_curve);
  nlohmann::ordered_json estimates = nlohmann::ordered_json::array();
  for (std::size_t step = 0; step < sec.estimates.size(); ++step) {
    nlohmann::ordered_json e = curve_to_json(sec.estimates[step]);
    e["step"] = step;
    estimates.push_back(std::move(e));
  }
  j["estimates"] = std::move(estimates);
  return j;
}

Section section_from_json(const nlohmann::ordered_json & j)
{
  Section sec;
  sec.id = j.at("id").get<std::string>();
  for (const auto & row : j.at("profile")) {
    if (row.size() != 3) {
      throw std::invalid_argument("profile row must be [t, v, s]");
    }
    sec.profile.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
  }
  const auto & x0 = j.at("x0");
  if (x0.size() != 4) {
    throw std::invalid_argument("x0 must be [d, theta, kappa, kappa_dot]");
  }
  sec.x0 = {x0[0].get<double>(), x0[1].get<double>(), x0[2].get<double>(), x0[3].get<double>()};
  sec.true_curve = curve_from_json(j.at("true_curve"));
  for (const auto & e : j.at("estimates")) {
    sec.estimates.push_back(curve_from_json(e));
  }
  return sec;
}

nlohmann::ordered_json dataset_to_json(const Dataset & ds)
{
  nlohmann::ordered_json j;
  j["sample_time"] = ds.sample_time;
  nlohmann::ordered_json sections = nlohmann::ordered_json::array();
  for (const auto & sec : ds.sections) {
    sections.push_back(section_to_json(sec));
  }
  j["sections"] = std::move(sections);
  j["meta"] = ds.meta;
  return j;
}

Dataset dataset_from_json(const nlohmann::ordered_json & j)
{
  Dataset ds;
  ds.sample_time = j.at("sample_time").get<double>();
  for (const auto & s : j.at("sections")) {
    ds.sections.push_back(section_from_json(s));
    ds.sections.back().sample_time = ds.sample_time;
  }
  if (j.contains("meta")) {
    ds.meta = j.at("meta");
  }
  ds.validate();
  return ds;
}

void save_dataset(const Dataset & ds, const std::filesystem::path & path)
{
  std::ofstream out(path);
  if (!out) {
    throw std::invalid_argument("save_dataset: cannot open '" + path.string() + "' for writing");
  }
  out << dataset_to_json(ds).dump(1) << "\n";
  if (!out) {
    throw std::runtime_error("save_dataset: write failed for '" + path.string() + "'");
  }
}

Dataset load_dataset(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("load_dataset: cannot open '" + path.string() + "'");
  }
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error & e) {
    throw std::invalid_argument("load_dataset: " + std::string(e.what()));
  }
  return dataset_from_json(j);
}

namespace
{

struct SectionStats
{
  double duration = 0.0;
  double v_mean = 0.0;
  double v_std = 0.0;
  double abs_kappa_mean = 0.0;
};

SectionStats section_stats(const Section & sec)
{
  SectionStats st;
  st.duration = sec.duration();
  double sum = 0.0, sum2 = 0.0;
  for (const auto & p : sec.profile) {
    sum += p.v;
    sum2 += p.v * p.v;
  }
  const double n = static_cast<double>(sec.profile.size());
  st.v_mean = sum / n;
  st.v_std = std::sqrt(std::max(0.0, sum2 / n - st.v_mean * st.v_mean));
  double ksum = 0.0;
  for (const auto & node : sec.true_curve.nodes()) {
    ksum += std::abs(node.kappa);
  }
  st.abs_kappa_mean = ksum / static_cast<double>(sec.true_curve.size());
  return st;
}

// Divergence between duration-weighted group means of the summary features.
double stats_divergence(
  const std::vector<SectionStats> & stats, const std::vector<bool> & in_test,
  const SectionStats & scale)
{
  double dur[2] = {0.0, 0.0};
  double vm[2] = {0.0, 0.0};
  double vs[2] = {0.0, 0.0};
  double km[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const int gidx = in_test[i] ? 1 : 0;
    dur[gidx] += stats[i].duration;
    vm[gidx] += stats[i].duration * stats[i].v_mean;
    vs[gidx] += stats[i].duration * stats[i].v_std;
    km[gidx] += stats[i].duration * stats[i].abs_kappa_mean;
  }
  if (dur[0] <= 0.0 || dur[1] <= 0.0) {
    return 1e9;
  }
  double div = 0.0;
  const double eps = 1e-12;
  div += std::pow((vm[0] / dur[0] - vm[1] / dur[1]) / (scale.v_mean + eps), 2);
  div += std::pow((vs[0] / dur[0] - vs[1] / dur[1]) / (scale.v_std + eps), 2);
  div += std::pow((km[0] / dur[0] - km[1] / dur[1]) / (scale.abs_kappa_mean + eps), 2);
  return div;
}

}  // namespace

std::vector<std::string> plan_split(const Dataset & ds, double test_fraction, std::uint64_t rng_seed)
{
  if (ds.sections.size() < 2) {
    throw std::invalid_argument("plan_split: need at least 2 sections");
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("plan_split: test_fraction must be in (0, 1)");
  }

  std::vector<SectionStats> stats;
  stats.reserve(ds.sections.size());
  double total = 0.0;
  SectionStats scale;
  for (const auto & sec : ds.sections) {
    stats.push_back(section_stats(sec));
    total += stats.back().duration;
    scale.v_mean += stats.back().duration * stats.back().v_mean;
    scale.v_std += stats.back().duration * stats.back().v_std;
    scale.abs_kappa_mean += stats.back().duration * stats.back().abs_kappa_mean;
  }
  scale.v_mean /= total;
  scale.v_std /= total;
  scale.abs_kappa_mean /= total;
  const double target = test_fraction * total;

  // seeded candidate order decides ties between equally good assignments
  std::vector<std::size_t> order(ds.sections.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(rng_seed, 0x5f17));
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);
  }

  std::vector<bool> in_test(ds.sections.size(), false);
  double test_dur = 0.0;
  std::size_t n_test = 0;

  while (n_test + 1 < ds.sections.size()) {
    double best_score = std::numeric_limits<double>::infinity();
    std::size_t best_idx = ds.sections.size();
    for (std::size_t idx : order) {
      if (in_test[idx]) {
        continue;
      }
      in_test[idx] = true;
      const double dur_term = std::abs(test_dur + stats[idx].duration - target) / total;
      const double score = dur_term + 0.1 * stats_divergence(stats, in_test, scale);
      in_test[idx] = false;
      if (score < best_score) {
        best_score = score;
        best_idx = idx;
      }
    }
    if (best_idx == ds.sections.size()) {
      break;
    }
    // stop when keeping the current split is closer to the target than growing it
    const double current_gap = std::abs(test_dur - target);
    const double next_gap = std::abs(test_dur + stats[best_idx].duration - target);
    if (n_test > 0 && current_gap <= next_gap) {
      break;
    }
    in_test[best_idx] = true;
    test_dur += stats[best_idx].duration;
    ++n_test;
  }

  std::vector<std::string> test_ids;
  for (std::size_t i = 0; i < ds.sections.size(); ++i) {
    if (in_test[i]) {
      test_ids.push_back(ds.sections[i].id);
    }
  }
  return test_ids;
}

std::pair<Dataset, Dataset> split_train_test(
  const Dataset & ds, double test_fraction, std::uint64_t rng_seed)
{
  const std::vector<std::string> test_ids = plan_split(ds, test_fraction, rng_seed);
  std::vector<std::string> train_ids;
  for (const auto & sec : ds.sections) {
    if (std::find(test_ids.begin(), test_ids.end(), sec.id) == test_ids.end()) {
      train_ids.push_back(sec.id);
    }
  }
  return {subset(ds, train_ids), subset(ds, test_ids)};
}

Dataset subset(const Dataset & ds, const std::vector<std::string> & ids)
{
  Dataset out;
  out.sample_time = ds.sample_time;
  out.meta = ds.meta;
  for (const auto & id : ids) {
    const auto it = std::find_if(
      ds.sections.begin(), ds.sections.end(),
      [&](const Section & s) {return s.id == id;});
    if (it == ds.sections.end()) {
      throw std::invalid_argument("subset: unknown section id '" + id + "'");
    }
    out.sections.push_back(*it);
  }
  return out;
}

}  // namespace lanetune
