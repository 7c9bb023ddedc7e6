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

// Single-machine weighted completion time with probeable job sizes.
//
// After probing a set S, jobs are ordered by Smith's rule on effective sizes
// (observed size for probed jobs, mean size otherwise). The resulting value
// has the closed form
//
//   sum_i w_i l_i + sum_{i<j} min(w_i l_j, w_j l_i),
//
// and its expectation over the probe outcomes is computed pair by pair.

#ifndef STOCHPROBE_WCT_HPP
#define STOCHPROBE_WCT_HPP

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "stochprobe/common.hpp"
#include "stochprobe/dist.hpp"
#include "stochprobe/oracle.hpp"

namespace stochprobe {

struct WctJob {
  DiscreteDist size;
  double weight = 1.0;
  double cost = 1.0;
};

struct WctInstance {
  std::vector<WctJob> jobs;
  double budget = 0.0;

  std::size_t size() const { return jobs.size(); }
  std::vector<double> costs() const;
  std::vector<double> means() const;
  /// Throws ValidationError: empty job list, negative weight or cost, budget below max cost.
  void validate() const;
};

/// Decreasing w/l; zero-size jobs first (by decreasing weight); ties by index.
std::vector<std::size_t> smith_order(std::span<const double> weights,
                                     std::span<const double> sizes);

/// Sum of w_i * C_i for jobs run back to back in `order`.
double weighted_completion_time(std::span<const std::size_t> order,
                                std::span<const double> weights,
                                std::span<const double> sizes);

/// Closed-form optimal weighted completion time for fixed sizes.
double smith_value(std::span<const double> weights, std::span<const double> sizes);

/// Optimal post-probe value when `probed` (sorted) realized at `observed`
/// (parallel to `probed`) and the other jobs count at their means.
double wct_value_given_realization(const WctInstance& inst, const IndexSet& probed,
                                   std::span<const double> observed);

/// Exact expected value of probing `probed` non-adaptively.
double wct_policy_value(const WctInstance& inst, const IndexSet& probed);

/// No-probe value on the jobs outside `outliers`.
double wct_outlier_value(const WctInstance& inst, const IndexSet& outliers);

struct OutlierLpSolution {
  Eigen::VectorXd z;       ///< fractional outlier indicators in [0, 1]
  double lp_value = 0.0;
};

/// LP objective with e_ij = max(0, 1 - z_i - z_j) substituted.
double outlier_lp_objective(const WctInstance& inst, const Eigen::VectorXd& z);

/// Solves the outlier LP relaxation with a dense simplex. A budget that covers
/// every probe cost short-circuits to z = 1.
OutlierLpSolution outlier_lp_solve(const WctInstance& inst);

/// {i : z_i >= 1/3}.
IndexSet round_outliers(const OutlierLpSolution& sol);

struct WctProbePolicy {
  IndexSet probe_set;
  double probe_cost = 0.0;
  double value = 0.0;
  OutlierLpSolution lp;
};

/// Probe the rounded LP outliers; value is exact.
WctProbePolicy wct_nonadaptive(const WctInstance& inst);

/// n unit-weight unit-cost jobs of size 0 w.p. 1 - 1/n and 1 w.p. 1/n; budget n.
WctInstance gen_benefit_instance(std::size_t n);

/// Oracle adapter.
ProbingModel wct_model(const WctInstance& inst);

}  // namespace stochprobe

#endif  // STOCHPROBE_WCT_HPP
