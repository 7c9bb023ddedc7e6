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

#ifndef STOCHPROBE_ORACLE_HPP
#define STOCHPROBE_ORACLE_HPP

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "stochprobe/common.hpp"
#include "stochprobe/dist.hpp"

namespace stochprobe {

/// Probed-state encoding shared with the objective modules: entry i is -1 for
/// an unprobed item, otherwise the index of its observed support atom.
using Outcome = std::span<const int>;

/// What an oracle needs to know about an objective.
///
/// `stop_value` is the optimal post-probe objective given the observations so
/// far (expectation over the unprobed items). `outlier_value` is the no-probe
/// objective on the items not flagged as outliers. `policy_value`, when set,
/// is a fast exact evaluator for a fixed probe set; otherwise the oracle
/// enumerates the probed items and averages `stop_value`.
struct ProbingModel {
  std::vector<DiscreteDist> dists;
  std::vector<double> costs;
  std::function<double(Outcome)> stop_value;
  std::function<double(const std::vector<bool>& outlier)> outlier_value;
  std::function<double(const IndexSet& probe)> policy_value;

  std::size_t size() const { return dists.size(); }
};

struct TreeNode {
  int probe = -1;                      ///< -1 at a leaf
  std::vector<std::size_t> children;   ///< one per support atom of `probe`
  std::vector<int> observation;        ///< state at this node
  double prob = 1.0;                   ///< probability of reaching this node
  double path_cost = 0.0;
  double value = 0.0;                  ///< optimal value of the subtree
};

/// Adaptive probing policy. Node 0 is the root.
struct DecisionTree {
  std::vector<TreeNode> nodes;
};

struct OracleResult {
  double value = 0.0;
  double expected_cost = 0.0;
  double max_cost = 0.0;
  IndexSet probe_set;                  ///< non-adaptive and outlier oracles
  std::optional<DecisionTree> tree;    ///< adaptive oracles
};

struct SoftBudgetBound {
  double lower_bound = 0.0;   ///< certified lower bound on the soft-budget optimum
  double best_lambda = 0.0;
  double upper_bound = 0.0;   ///< hard-budget optimum, which dominates it
};

inline constexpr double kDefaultStateCap = 1e7;

/// Exact expected value of probing `probe` non-adaptively.
double nonadaptive_value(const ProbingModel& model, const IndexSet& probe,
                         double enum_cap = kDefaultEnumCap);

/// Best probe subset of cost <= budget, by exhaustive search (n <= 20).
/// Ties go to the cheaper set, then the smaller mask.
OracleResult nonadaptive_opt(const ProbingModel& model, double budget,
                             double enum_cap = kDefaultEnumCap);

/// Optimal adaptive policy whose probe cost is <= budget on every path.
OracleResult adaptive_opt_hard(const ProbingModel& model, double budget,
                               double state_cap = kDefaultStateCap);

/// {0} together with 2^-10 .. 2^10.
std::vector<double> default_lambda_grid();

/// Lagrangian lower bound max_lambda [min_tree E(value + lambda * cost)] - lambda * budget.
SoftBudgetBound adaptive_opt_soft_lb(const ProbingModel& model, double budget,
                                     std::span<const double> lambda_grid,
                                     double state_cap = kDefaultStateCap);

/// Exact outlier optimum: min over outlier sets of cost <= budget of outlier_value.
OracleResult exact_outlier_opt(const ProbingModel& model, double budget);

/// Re-evaluates a tree from scratch against the model; throws ConsistencyError
/// when an item is probed twice on a path or leaf probabilities do not sum to one.
double evaluate_tree(const ProbingModel& model, const DecisionTree& tree);
double tree_max_cost(const DecisionTree& tree);
double tree_expected_cost(const DecisionTree& tree);

}  // namespace stochprobe

#endif  // STOCHPROBE_ORACLE_HPP
