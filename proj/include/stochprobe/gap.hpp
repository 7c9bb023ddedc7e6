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

// K-median instance family where centers may be unprobed nodes and adaptive
// probing beats every non-adaptive probe set.
//
// Each of M far-apart copies holds r+1 cheap nodes (cost 1) at (0,0) or
// (i+1,0) with probability 1/2 each, and t pairs of expensive nodes (cost
// (r+1)M): Y_j at (x_j, 1) and Z_j at (x_j, -1), each dropping to (x_j, 0)
// with probability q = ln(t)/t. Every copy gets 2t+r medians, one fewer than
// its node count, so a copy costs nothing unless its cheap nodes land on
// r+1 distinct points.

#ifndef STOCHPROBE_GAP_HPP
#define STOCHPROBE_GAP_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "stochprobe/common.hpp"
#include "stochprobe/kmedian.hpp"
#include "stochprobe/metric.hpp"

namespace stochprobe {

struct GapInstanceSpec {
  std::size_t copies = 2;  ///< M
  std::size_t pairs = 8;   ///< t
  std::size_t r = 9;

  /// Throws ValidationError unless r > 2 log2(M t), t >= 4 sqrt(M), M >= 1.
  void validate() const;
};

struct GapInstance {
  GapInstanceSpec spec;
  KMedianInstance inst;
  double q = 0.0;               ///< drop probability of an expensive node
  double separation = 0.0;      ///< L = M^2; pairs sit max(L, 3) apart
  double copy_offset = 0.0;     ///< x distance between consecutive copies
  std::vector<IndexSet> cheap;  ///< per copy, node indices
  std::vector<IndexSet> y, z;   ///< per copy, node indices of pair members

  std::size_t medians_per_copy() const { return 2 * spec.pairs + spec.r; }
  double cheap_cost() const { return 1.0; }
  double expensive_cost() const;
};

GapInstance gen_gap_instance(const GapInstanceSpec& spec);

/// Optimal value for clients that may serve as their own centers when k is
/// at least the number of distinct clients minus one; falls back to local
/// search below that.
double gap_copy_value(const ExtendedMetric& d, std::span<const std::size_t> clients,
                      std::size_t k);

struct ScriptedResult {
  double value = 0.0;
  double expected_cost = 0.0;
  double half_width = 0.0;
  bool exact = true;
};

/// Probe all cheap nodes; if some copy sees r+1 distinct cheap locations,
/// probe every expensive node. Exact by per-copy enumeration.
ScriptedResult scripted_adaptive_exact(const GapInstance& g, const ExtendedMetric& d);

/// The same policy simulated realization by realization.
ScriptedResult scripted_adaptive_mc(const GapInstance& g, const ExtendedMetric& d,
                                    const EvalOptions& opts);

struct GapFamily {
  std::string name;
  double cost = 0.0;
  double value = 0.0;
  bool affordable = false;
};

/// Non-adaptive probe sets from the construction: nothing, cheap nodes only,
/// cheap nodes plus one expensive pair per copy. Values are exact.
std::vector<GapFamily> gap_nonadaptive_families(const GapInstance& g, const ExtendedMetric& d,
                                                double budget);

}  // namespace stochprobe

#endif  // STOCHPROBE_GAP_HPP
