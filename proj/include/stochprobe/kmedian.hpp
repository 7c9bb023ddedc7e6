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

// K-median over the extended metric with probeable node locations.
//
// Clients and centers are extended-metric indices. After probing, a probed
// node becomes the point it landed on and an unprobed node stays a node.
// In fixed-center mode centers come from a candidate subset of the points;
// in arbitrary-center mode unprobed nodes may be opened as well.

#ifndef STOCHPROBE_KMEDIAN_HPP
#define STOCHPROBE_KMEDIAN_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "stochprobe/common.hpp"
#include "stochprobe/metric.hpp"
#include "stochprobe/oracle.hpp"

namespace stochprobe {

struct KMedianInstance {
  PointSet points;
  NodeSet nodes;
  std::size_t k = 1;
  IndexSet centers;  ///< candidate point indices
  double budget = 0.0;
  bool arbitrary_centers = false;

  std::size_t size() const { return nodes.size(); }
  std::vector<double> costs() const;
  /// Throws ValidationError: no nodes, K = 0, bad candidates, budget below max cost.
  void validate() const;
};

struct ClusteringSolution {
  IndexSet centers;                    ///< metric indices
  std::vector<std::size_t> assignment; ///< per client, the metric index of its center
  double value = 0.0;
};

/// Nearest open center per client (lowest index on ties).
ClusteringSolution assign_clients(const ExtendedMetric& d, std::span<const std::size_t> clients,
                                  const IndexSet& centers);

/// Greedy start, then best single swaps until no swap gains 1e-6 of the value.
ClusteringSolution kmedian_local_search(const ExtendedMetric& d,
                                        std::span<const std::size_t> clients,
                                        const IndexSet& candidates, std::size_t k);

/// Exact optimum over all k-subsets of the candidates; throws
/// EnumerationTooLarge when C(|candidates|, k) exceeds `cap`.
ClusteringSolution kmedian_exhaustive(const ExtendedMetric& d,
                                      std::span<const std::size_t> clients,
                                      const IndexSet& candidates, std::size_t k,
                                      double cap = 1e6);

/// Exhaustive when C(|candidates|, k) <= 2000, local search otherwise.
ClusteringSolution kmedian_solve(const ExtendedMetric& d, std::span<const std::size_t> clients,
                                 const IndexSet& candidates, std::size_t k);

/// Candidate centers once `unprobed` nodes remain unresolved.
IndexSet center_candidates(const KMedianInstance& inst, const ExtendedMetric& d,
                           const IndexSet& unprobed);

/// No-probe clustering value of the nodes outside `outliers`.
double kmedian_outlier_value(const KMedianInstance& inst, const ExtendedMetric& d,
                             const IndexSet& outliers);

/// Outlier nodes: exhaustive over affordable sets (budget C) for |V| <= 20,
/// otherwise greedy removal by gain per unit cost with budget 5C.
OutlierSelection outlier_kmedian(const KMedianInstance& inst, const ExtendedMetric& d);

/// Expected post-probe clustering value when `probed` is probed.
PolicyValue kmedian_policy_value(const KMedianInstance& inst, const ExtendedMetric& d,
                                 const IndexSet& probed, const EvalOptions& opts);

struct KMedianPolicy {
  OutlierSelection selection;
  PolicyValue value;
};

KMedianPolicy kmedian_nonadaptive(const KMedianInstance& inst, const ExtendedMetric& d,
                                  const EvalOptions& opts);

struct RecombinantCheck {
  double q1 = 0.0;  ///< optimum with A realized and the rest unprobed
  double q2 = 0.0;  ///< optimum on the unprobed nodes alone
  double q3 = 0.0;  ///< expected per-scenario optimum
  bool holds = false;
};

/// Exact Q1, Q2, Q3 for probed set A realized at the point indices `at`
/// (parallel to A); holds when Q1 <= 5 Q2 + 4 Q3 + 1e-9.
RecombinantCheck recombinant_check_kmedian(const KMedianInstance& inst, const ExtendedMetric& d,
                                           const IndexSet& A, std::span<const std::size_t> at,
                                           double enum_cap = kDefaultEnumCap);

/// Oracle adapter; `inst` and `d` must outlive the returned model.
ProbingModel kmedian_model(const KMedianInstance& inst, const ExtendedMetric& d);

}  // namespace stochprobe

#endif  // STOCHPROBE_KMEDIAN_HPP
