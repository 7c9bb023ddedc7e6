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

#include "stochprobe/steiner.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

#include "stochprobe/errors.hpp"

namespace stochprobe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kExhaustiveOutlierNodes = 20;

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<double> SteinerInstance::costs() const {
  std::vector<double> c;
  for (const auto& v : nodes) c.push_back(v.cost);
  return c;
}

void SteinerInstance::validate() const {
  if (nodes.size() < 2) throw ValidationError("items", "at least two nodes are required");
  validate_nodes(points, nodes);
  double max_cost = 0.0;
  for (const auto& v : nodes) max_cost = std::max(max_cost, v.cost);
  if (!(budget >= max_cost))
    throw ValidationError("budget", "budget " + std::to_string(budget) +
                                        " is below the largest probe cost " +
                                        std::to_string(max_cost));
}

TreeSolution mst_over_terminals(const ExtendedMetric& d, std::span<const std::size_t> terminals) {
  TreeSolution t;
  t.terminals.assign(terminals.begin(), terminals.end());
  const std::size_t n = terminals.size();
  std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
  edges.reserve(n * (n - (n > 0)) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(d(terminals[i], terminals[j]), i, j);
  std::sort(edges.begin(), edges.end());
  DisjointSets ds(n);
  for (const auto& [w, i, j] : edges) {
    if (!ds.unite(i, j)) continue;
    t.edges.emplace_back(i, j);
    t.value += w;
    if (t.edges.size() + 1 == n) break;
  }
  return t;
}

double steiner_outlier_value(const ExtendedMetric& d, std::size_t num_nodes,
                             const IndexSet& outliers) {
  std::vector<std::size_t> terms;
  for (auto v : complement(outliers, num_nodes)) terms.push_back(d.node(v));
  return mst_over_terminals(d, terms).value;
}

OutlierSelection outlier_steiner(const SteinerInstance& inst, const ExtendedMetric& d) {
  const std::size_t n = inst.size();
  const auto costs = inst.costs();
  OutlierSelection best;
  best.value = kInf;

  if (n <= kExhaustiveOutlierNodes) {
    best.exhaustive = true;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const auto S = mask_to_set(mask, n);
      const double c = set_cost(S, costs);
      if (!within_budget(c, inst.budget)) continue;
      const double v = steiner_outlier_value(d, n, S);
      if (v < best.value - 1e-12 || (v <= best.value + 1e-12 && c < best.cost)) {
        best.outliers = S;
        best.cost = c;
        best.value = v;
      }
    }
    return best;
  }

  const double budget = 4.0 * inst.budget;
  best.value = steiner_outlier_value(d, n, {});
  std::vector<bool> out(n, false);
  for (;;) {
    double best_rate = 0.0, best_value = best.value;
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (out[i] || !within_budget(best.cost + costs[i], budget)) continue;
      auto S = best.outliers;
      S.insert(std::upper_bound(S.begin(), S.end(), i), i);
      const double v = steiner_outlier_value(d, n, S);
      const double gain = best.value - v;
      const double rate = costs[i] > 0.0 ? gain / costs[i] : (gain > 0.0 ? kInf : 0.0);
      if (gain > 1e-12 && rate > best_rate) {
        best_rate = rate;
        best_value = v;
        pick = i;
      }
    }
    if (pick == n) break;
    out[pick] = true;
    best.outliers.insert(std::upper_bound(best.outliers.begin(), best.outliers.end(), pick), pick);
    best.cost += costs[pick];
    best.value = best_value;
  }
  return best;
}

PolicyValue steiner_policy_value(const SteinerInstance& inst, const ExtendedMetric& d,
                                 const IndexSet& probed, const EvalOptions& opts) {
  const auto unprobed = complement(probed, inst.size());
  return expect_over_locations(inst.nodes, probed, opts, [&](std::span<const std::size_t> at) {
    std::vector<std::size_t> terms(at.begin(), at.end());
    for (auto v : unprobed) terms.push_back(d.node(v));
    return mst_over_terminals(d, terms).value;
  });
}

SteinerPolicy steiner_nonadaptive(const SteinerInstance& inst, const ExtendedMetric& d,
                                  const EvalOptions& opts) {
  inst.validate();
  SteinerPolicy p;
  p.selection = outlier_steiner(inst, d);
  p.value = steiner_policy_value(inst, d, p.selection.outliers, opts);
  return p;
}

SteinerRecombinantCheck recombinant_check_steiner(const SteinerInstance& inst,
                                                  const ExtendedMetric& d, const IndexSet& A,
                                                  std::span<const std::size_t> at) {
  SteinerRecombinantCheck r;
  std::vector<std::size_t> probed(at.begin(), at.end()), rest;
  for (auto v : complement(A, inst.size())) rest.push_back(d.node(v));
  std::vector<std::size_t> both = probed;
  both.insert(both.end(), rest.begin(), rest.end());
  r.lhs = mst_over_terminals(d, both).value;
  r.t1 = mst_over_terminals(d, probed).value;
  r.t2 = mst_over_terminals(d, rest).value;
  if (!probed.empty() && !rest.empty()) {
    r.cross = kInf;
    for (auto a : probed)
      for (auto b : rest) r.cross = std::min(r.cross, d(a, b));
  }
  r.holds = r.lhs <= r.t1 + r.t2 + r.cross + 1e-9;
  return r;
}

ProbingModel steiner_model(const SteinerInstance& inst, const ExtendedMetric& d) {
  ProbingModel model;
  for (const auto& v : inst.nodes) {
    model.dists.push_back(v.location);
    model.costs.push_back(v.cost);
  }
  model.stop_value = [dists = model.dists, &d](Outcome obs) {
    std::vector<std::size_t> terms;
    for (std::size_t v = 0; v < obs.size(); ++v)
      terms.push_back(obs[v] >= 0
                          ? static_cast<std::size_t>(dists[v].value(static_cast<std::size_t>(obs[v])))
                          : d.node(v));
    return mst_over_terminals(d, terms).value;
  };
  model.outlier_value = [&d](const std::vector<bool>& out) {
    IndexSet S;
    for (std::size_t v = 0; v < out.size(); ++v)
      if (out[v]) S.push_back(v);
    return steiner_outlier_value(d, out.size(), S);
  };
  return model;
}

}  // namespace stochprobe
