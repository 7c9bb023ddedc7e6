// Copyright 2026 The stochprobe Authors
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

#include "stochprobe/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace stochprobe {

namespace {

// Random probabilities over `values` (duplicates merged).
DiscreteDist random_weights(Rng& rng, const std::vector<double>& values) {
  std::map<double, double> mass;
  double total = 0.0;
  for (double v : values) {
    const double p = 0.05 + rng.uniform();
    mass[v] += p;
    total += p;
  }
  std::vector<DiscreteDist::Atom> atoms;
  for (const auto& [v, p] : mass) atoms.push_back({v, p / total});
  return DiscreteDist::normalized(std::move(atoms), 1e-9);
}

double budget_between(Rng& rng, const std::vector<double>& costs) {
  const double hi = std::accumulate(costs.begin(), costs.end(), 0.0);
  const double lo = *std::max_element(costs.begin(), costs.end());
  return lo + std::floor(rng.uniform() * (hi - lo + 1.0));
}

}  // namespace

DiscreteDist random_size_dist(Rng& rng, std::size_t max_support, double max_value) {
  const std::size_t s = 1 + rng.below(max_support);
  const auto steps = static_cast<std::uint64_t>(2.0 * max_value) + 1;
  std::vector<double> values;
  for (std::size_t k = 0; k < s; ++k) values.push_back(0.5 * static_cast<double>(rng.below(steps)));
  return random_weights(rng, values);
}

WctInstance random_wct_instance(Rng& rng, std::size_t n, std::size_t max_support) {
  WctInstance inst;
  for (std::size_t i = 0; i < n; ++i) {
    WctJob j{random_size_dist(rng, max_support, 10.0), 0.0, 0.0};
    j.weight = 5.0 * (1.0 - rng.uniform());
    j.cost = static_cast<double>(1 + rng.below(3));
    inst.jobs.push_back(std::move(j));
  }
  inst.budget = budget_between(rng, inst.costs());
  return inst;
}

MakespanInstance random_makespan_instance(Rng& rng, std::size_t n, std::size_t max_support,
                                          int machines) {
  MakespanInstance inst;
  inst.machines = machines;
  for (std::size_t i = 0; i < n; ++i)
    inst.jobs.push_back({random_size_dist(rng, max_support, 10.0),
                         static_cast<double>(1 + rng.below(3))});
  inst.budget = budget_between(rng, inst.costs());
  return inst;
}

PointSet random_point_set(Rng& rng, std::size_t points, Norm norm) {
  Eigen::MatrixX2d xy(static_cast<Eigen::Index>(points), 2);
  for (Eigen::Index p = 0; p < xy.rows(); ++p)
    xy.row(p) << static_cast<double>(rng.below(11)), static_cast<double>(rng.below(11));
  return PointSet::from_coordinates(std::move(xy), norm);
}

NodeSet random_node_set(Rng& rng, const PointSet& ps, std::size_t nodes,
                        std::size_t max_support) {
  NodeSet ns;
  for (std::size_t v = 0; v < nodes; ++v) {
    const std::size_t s = 1 + rng.below(max_support);
    std::vector<double> at;
    for (std::size_t k = 0; k < s; ++k) at.push_back(static_cast<double>(rng.below(ps.size())));
    ns.push_back({random_weights(rng, at), static_cast<double>(1 + rng.below(3))});
  }
  return ns;
}

KMedianInstance random_kmedian_instance(Rng& rng, std::size_t points, std::size_t nodes,
                                        std::size_t max_support, std::size_t k) {
  KMedianInstance inst;
  inst.points = random_point_set(rng, points, Norm::kL2);
  inst.nodes = random_node_set(rng, inst.points, nodes, max_support);
  inst.k = k;
  inst.centers = full_set(points);
  inst.budget = budget_between(rng, inst.costs());
  return inst;
}

SteinerInstance random_steiner_instance(Rng& rng, std::size_t points, std::size_t nodes,
                                        std::size_t max_support) {
  SteinerInstance inst;
  inst.points = random_point_set(rng, points, Norm::kL2);
  inst.nodes = random_node_set(rng, inst.points, nodes, max_support);
  inst.budget = budget_between(rng, inst.costs());
  return inst;
}

}  // namespace stochprobe
