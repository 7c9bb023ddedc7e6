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

#include "stochprobe/oracle.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "stochprobe/errors.hpp"

namespace stochprobe {

namespace {

constexpr std::size_t kMaxSubsetItems = 20;
constexpr double kTieTol = 1e-12;

void check_subset_size(const ProbingModel& model, const char* what) {
  if (model.size() > kMaxSubsetItems)
    throw EnumerationTooLarge(what, std::ldexp(1.0, static_cast<int>(model.size())),
                              std::ldexp(1.0, kMaxSubsetItems));
}

// Memoized Bellman recursion over (probed set, observed atoms). A state is a
// mixed-radix number whose digit i is 0 when item i is unprobed and k+1 when
// it was observed at atom k.
class AdaptiveSolver {
 public:
  AdaptiveSolver(const ProbingModel& model, double budget, double lambda, double cap)
      : model_(model), budget_(budget), lambda_(lambda) {
    const std::size_t n = model.size();
    stride_.resize(n);
    double states = 1.0;
    for (std::size_t i = 0; i < n; ++i) states *= static_cast<double>(model.dists[i].size() + 1);
    if (states > cap) throw EnumerationTooLarge("adaptive state space", states, cap);
    std::uint64_t s = 1;
    for (std::size_t i = n; i-- > 0;) {
      stride_[i] = s;
      s *= model.dists[i].size() + 1;
    }
    memo_.assign(s, std::numeric_limits<double>::quiet_NaN());
    action_.assign(s, -1);
  }

  double solve_root() {
    std::vector<int> obs(model_.size(), -1);
    return solve(obs, 0, 0.0);
  }

  DecisionTree extract() {
    DecisionTree tree;
    std::vector<int> obs(model_.size(), -1);
    build(tree, obs, 0, 1.0, 0.0);
    return tree;
  }

 private:
  double solve(std::vector<int>& obs, std::uint64_t code, double spent) {
    if (!std::isnan(memo_[code])) return memo_[code];
    double best = model_.stop_value(obs);
    int act = -1;
    for (std::size_t i = 0; i < obs.size(); ++i) {
      if (obs[i] >= 0) continue;
      const double c = model_.costs[i];
      if (!std::isinf(budget_) && !within_budget(spent + c, budget_)) continue;
      const auto& d = model_.dists[i];
      double ev = lambda_ * c;
      for (std::size_t k = 0; k < d.size(); ++k) {
        obs[i] = static_cast<int>(k);
        ev += d.prob(k) * solve(obs, code + (k + 1) * stride_[i], spent + c);
      }
      obs[i] = -1;
      if (ev < best - kTieTol) {
        best = ev;
        act = static_cast<int>(i);
      }
    }
    memo_[code] = best;
    action_[code] = act;
    return best;
  }

  // Returns the raw expected objective of the subtree (no cost penalty).
  double build(DecisionTree& tree, std::vector<int>& obs, std::uint64_t code,
               double prob, double spent) {
    const std::size_t id = tree.nodes.size();
    tree.nodes.push_back({});
    tree.nodes[id].observation = obs;
    tree.nodes[id].prob = prob;
    tree.nodes[id].path_cost = spent;
    if (std::isnan(memo_[code])) solve(obs, code, spent);
    const int act = action_[code];
    if (act < 0) {
      tree.nodes[id].value = model_.stop_value(obs);
      return tree.nodes[id].value;
    }
    tree.nodes[id].probe = act;
    const auto i = static_cast<std::size_t>(act);
    const auto& d = model_.dists[i];
    double v = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
      obs[i] = static_cast<int>(k);
      tree.nodes[id].children.push_back(tree.nodes.size());
      v += d.prob(k) * build(tree, obs, code + (k + 1) * stride_[i], prob * d.prob(k),
                             spent + model_.costs[i]);
    }
    obs[i] = -1;
    tree.nodes[id].value = v;
    return v;
  }

  const ProbingModel& model_;
  double budget_;
  double lambda_;
  std::vector<std::uint64_t> stride_;
  std::vector<double> memo_;
  std::vector<int> action_;
};

}  // namespace

double nonadaptive_value(const ProbingModel& model, const IndexSet& probe, double enum_cap) {
  if (model.policy_value) return model.policy_value(probe);
  std::vector<const DiscreteDist*> ds;
  for (auto i : probe) ds.push_back(&model.dists[i]);
  JointEnumerator e(std::move(ds), enum_cap);
  std::vector<int> obs(model.size(), -1);
  double v = 0.0;
  while (e.next()) {
    for (std::size_t k = 0; k < probe.size(); ++k)
      obs[probe[k]] = static_cast<int>(e.indices()[k]);
    v += e.prob() * model.stop_value(obs);
  }
  return v;
}

OracleResult nonadaptive_opt(const ProbingModel& model, double budget, double enum_cap) {
  check_subset_size(model, "non-adaptive subsets");
  const std::size_t n = model.size();
  OracleResult best;
  best.value = std::numeric_limits<double>::infinity();
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const IndexSet s = mask_to_set(mask, n);
    const double c = set_cost(s, model.costs);
    if (!within_budget(c, budget)) continue;
    const double v = nonadaptive_value(model, s, enum_cap);
    if (v < best.value - kTieTol || (v <= best.value + kTieTol && c < best_cost)) {
      best.value = v;
      best.probe_set = s;
      best_cost = c;
    }
  }
  best.expected_cost = best.max_cost = best_cost;
  return best;
}

OracleResult adaptive_opt_hard(const ProbingModel& model, double budget, double state_cap) {
  AdaptiveSolver solver(model, budget, 0.0, state_cap);
  OracleResult r;
  r.value = solver.solve_root();
  r.tree = solver.extract();
  r.expected_cost = tree_expected_cost(*r.tree);
  r.max_cost = tree_max_cost(*r.tree);
  return r;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> g{0.0};
  for (int k = -10; k <= 10; ++k) g.push_back(std::ldexp(1.0, k));
  return g;
}

SoftBudgetBound adaptive_opt_soft_lb(const ProbingModel& model, double budget,
                                     std::span<const double> lambda_grid, double state_cap) {
  SoftBudgetBound b;
  b.lower_bound = -std::numeric_limits<double>::infinity();
  for (double lambda : lambda_grid) {
    AdaptiveSolver solver(model, std::numeric_limits<double>::infinity(), lambda, state_cap);
    const double bound = solver.solve_root() - lambda * budget;
    if (bound > b.lower_bound) {
      b.lower_bound = bound;
      b.best_lambda = lambda;
    }
  }
  b.upper_bound = adaptive_opt_hard(model, budget, state_cap).value;
  return b;
}

OracleResult exact_outlier_opt(const ProbingModel& model, double budget) {
  check_subset_size(model, "outlier subsets");
  const std::size_t n = model.size();
  OracleResult best;
  best.value = std::numeric_limits<double>::infinity();
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const IndexSet s = mask_to_set(mask, n);
    const double c = set_cost(s, model.costs);
    if (!within_budget(c, budget)) continue;
    const double v = model.outlier_value(set_to_flags(s, n));
    if (v < best.value - kTieTol || (v <= best.value + kTieTol && c < best_cost)) {
      best.value = v;
      best.probe_set = s;
      best_cost = c;
    }
  }
  best.expected_cost = best.max_cost = best_cost;
  return best;
}

double evaluate_tree(const ProbingModel& model, const DecisionTree& tree) {
  if (tree.nodes.empty()) throw ConsistencyError("empty decision tree");
  double value = 0.0, mass = 0.0;
  std::vector<int> obs(model.size(), -1);
  auto walk = [&](auto&& self, std::size_t id, double prob) -> void {
    const TreeNode& node = tree.nodes.at(id);
    if (std::abs(node.prob - prob) > 1e-9)
      throw ConsistencyError("node " + std::to_string(id) + " probability disagrees with the model");
    if (node.probe < 0) {
      value += prob * model.stop_value(obs);
      mass += prob;
      return;
    }
    const auto i = static_cast<std::size_t>(node.probe);
    if (obs.at(i) >= 0)
      throw ConsistencyError("item " + std::to_string(i) + " probed twice on a path");
    const auto& d = model.dists[i];
    if (node.children.size() != d.size())
      throw ConsistencyError("decision node has wrong number of children");
    for (std::size_t k = 0; k < d.size(); ++k) {
      obs[i] = static_cast<int>(k);
      self(self, node.children[k], prob * d.prob(k));
    }
    obs[i] = -1;
  };
  walk(walk, 0, 1.0);
  if (std::abs(mass - 1.0) > 1e-9)
    throw ConsistencyError("leaf probabilities sum to " + std::to_string(mass));
  return value;
}

double tree_max_cost(const DecisionTree& tree) {
  double m = 0.0;
  for (const auto& n : tree.nodes)
    if (n.probe < 0) m = std::max(m, n.path_cost);
  return m;
}

double tree_expected_cost(const DecisionTree& tree) {
  double e = 0.0;
  for (const auto& n : tree.nodes)
    if (n.probe < 0) e += n.prob * n.path_cost;
  return e;
}

}  // namespace stochprobe
