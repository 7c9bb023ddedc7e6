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

// Steiner tree over probeable node locations, approximated by the minimum
// spanning tree of the terminals in the extended metric.

#ifndef STOCHPROBE_STEINER_HPP
#define STOCHPROBE_STEINER_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "stochprobe/common.hpp"
#include "stochprobe/metric.hpp"
#include "stochprobe/oracle.hpp"

namespace stochprobe {

struct SteinerInstance {
  PointSet points;
  NodeSet nodes;
  double budget = 0.0;

  std::size_t size() const { return nodes.size(); }
  std::vector<double> costs() const;
  /// Throws ValidationError: fewer than two nodes, bad locations, budget below max cost.
  void validate() const;
};

struct TreeSolution {
  std::vector<std::pair<std::size_t, std::size_t>> edges;  ///< positions in `terminals`
  std::vector<std::size_t> terminals;                      ///< metric indices
  double value = 0.0;
};

/// Kruskal on the complete graph over the terminals; equal lengths are
/// broken by the lexicographic order of (position, position).
TreeSolution mst_over_terminals(const ExtendedMetric& d, std::span<const std::size_t> terminals);

/// MST value of the nodes outside `outliers`, no probing.
double steiner_outlier_value(const ExtendedMetric& d, std::size_t num_nodes,
                             const IndexSet& outliers);

/// Outlier nodes: exhaustive over affordable sets (budget C) for |V| <= 20,
/// otherwise greedy removal by MST gain per unit cost with budget 4C.
OutlierSelection outlier_steiner(const SteinerInstance& inst, const ExtendedMetric& d);

PolicyValue steiner_policy_value(const SteinerInstance& inst, const ExtendedMetric& d,
                                 const IndexSet& probed, const EvalOptions& opts);

struct SteinerPolicy {
  OutlierSelection selection;
  PolicyValue value;
};

SteinerPolicy steiner_nonadaptive(const SteinerInstance& inst, const ExtendedMetric& d,
                                  const EvalOptions& opts);

struct SteinerRecombinantCheck {
  double lhs = 0.0;    ///< MST over realized A plus unprobed nodes
  double t1 = 0.0;     ///< MST over realized A
  double t2 = 0.0;     ///< MST over unprobed nodes
  double cross = 0.0;  ///< cheapest edge between the two sides
  bool holds = false;
};

/// Probed set A realized at point indices `at` (parallel to A).
SteinerRecombinantCheck recombinant_check_steiner(const SteinerInstance& inst,
                                                  const ExtendedMetric& d, const IndexSet& A,
                                                  std::span<const std::size_t> at);

/// Oracle adapter; `d` must outlive the returned model.
ProbingModel steiner_model(const SteinerInstance& inst, const ExtendedMetric& d);

}  // namespace stochprobe

#endif  // STOCHPROBE_STEINER_HPP
