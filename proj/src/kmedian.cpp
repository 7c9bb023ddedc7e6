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

#include "stochprobe/kmedian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "stochprobe/errors.hpp"

namespace stochprobe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kExhaustiveCombos = 2000.0;
constexpr std::size_t kExhaustiveOutlierNodes = 20;

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

double clustering_cost(const ExtendedMetric& d, std::span<const std::size_t> clients,
                       const IndexSet& centers) {
  if (clients.empty()) return 0.0;
  double total = 0.0;
  for (auto c : clients) {
    double best = kInf;
    for (auto x : centers) best = std::min(best, d(c, x));
    total += best;
  }
  return total;
}

}  // namespace

std::vector<double> KMedianInstance::costs() const {
  std::vector<double> c;
  for (const auto& v : nodes) c.push_back(v.cost);
  return c;
}

void KMedianInstance::validate() const {
  if (nodes.empty()) throw ValidationError("items", "at least one node is required");
  if (k == 0) throw ValidationError("K", "must be >= 1");
  validate_nodes(points, nodes);
  for (auto p : centers)
    if (p >= points.size())
      throw ValidationError("centers", "center " + std::to_string(p) + " is not a point index");
  if (!arbitrary_centers && centers.size() < k)
    throw ValidationError("centers", "fewer candidate centers than K");
  double max_cost = 0.0;
  for (const auto& v : nodes) max_cost = std::max(max_cost, v.cost);
  if (!(budget >= max_cost))
    throw ValidationError("budget", "budget " + std::to_string(budget) +
                                        " is below the largest probe cost " +
                                        std::to_string(max_cost));
}

ClusteringSolution assign_clients(const ExtendedMetric& d, std::span<const std::size_t> clients,
                                  const IndexSet& centers) {
  ClusteringSolution s;
  s.centers = centers;
  if (!clients.empty() && centers.empty())
    throw ConsistencyError("clients present but no center is open");
  for (auto c : clients) {
    std::size_t best = centers.front();
    for (auto x : centers)
      if (d(c, x) < d(c, best)) best = x;
    s.assignment.push_back(best);
    s.value += d(c, best);
  }
  return s;
}

ClusteringSolution kmedian_local_search(const ExtendedMetric& d,
                                        std::span<const std::size_t> clients,
                                        const IndexSet& candidates, std::size_t k) {
  if (candidates.size() <= k) return assign_clients(d, clients, candidates);

  // Greedy start.
  IndexSet open;
  std::vector<bool> is_open(candidates.size(), false);
  for (std::size_t round = 0; round < k; ++round) {
    double best = kInf;
    std::size_t pick = 0;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (is_open[j]) continue;
      open.push_back(candidates[j]);
      const double v = clustering_cost(d, clients, open);
      open.pop_back();
      if (v < best) {
        best = v;
        pick = j;
      }
    }
    is_open[pick] = true;
    open.push_back(candidates[pick]);
  }

  double value = clustering_cost(d, clients, open);
  std::vector<std::size_t> slot_of;  // candidate position of each open slot
  for (std::size_t j = 0; j < candidates.size(); ++j)
    if (is_open[j]) slot_of.push_back(j);
  // `open` was filled in greedy order; rebuild it in slot order.
  for (std::size_t s = 0; s < slot_of.size(); ++s) open[s] = candidates[slot_of[s]];

  while (value > 0.0) {
    double best = value;
    std::size_t best_slot = 0, best_cand = 0;
    for (std::size_t s = 0; s < open.size(); ++s) {
      const std::size_t old = open[s];
      for (std::size_t j = 0; j < candidates.size(); ++j) {
        if (is_open[j]) continue;
        open[s] = candidates[j];
        const double v = clustering_cost(d, clients, open);
        if (v < best) {
          best = v;
          best_slot = s;
          best_cand = j;
        }
      }
      open[s] = old;
    }
    if (value - best <= 1e-6 * value) break;
    is_open[slot_of[best_slot]] = false;
    is_open[best_cand] = true;
    slot_of[best_slot] = best_cand;
    open[best_slot] = candidates[best_cand];
    value = best;
  }
  auto sorted = open;
  std::sort(sorted.begin(), sorted.end());
  return assign_clients(d, clients, sorted);
}

ClusteringSolution kmedian_exhaustive(const ExtendedMetric& d,
                                      std::span<const std::size_t> clients,
                                      const IndexSet& candidates, std::size_t k, double cap) {
  const std::size_t n = candidates.size();
  if (n <= k) return assign_clients(d, clients, candidates);
  const double combos = binomial(n, k);
  if (combos > cap) throw EnumerationTooLarge("k-median center subsets", combos, cap);

  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  IndexSet open(k), best_set;
  double best = kInf;
  for (;;) {
    for (std::size_t i = 0; i < k; ++i) open[i] = candidates[pick[i]];
    const double v = clustering_cost(d, clients, open);
    if (v < best - 1e-12) {
      best = v;
      best_set = open;
    }
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::sort(best_set.begin(), best_set.end());
  return assign_clients(d, clients, best_set);
}

ClusteringSolution kmedian_solve(const ExtendedMetric& d, std::span<const std::size_t> clients,
                                 const IndexSet& candidates, std::size_t k) {
  if (clients.empty()) return {};
  if (binomial(candidates.size(), k) <= kExhaustiveCombos)
    return kmedian_exhaustive(d, clients, candidates, k);
  return kmedian_local_search(d, clients, candidates, k);
}

IndexSet center_candidates(const KMedianInstance& inst, const ExtendedMetric& d,
                           const IndexSet& unprobed) {
  if (!inst.arbitrary_centers) return inst.centers;
  IndexSet c = full_set(d.num_points);
  for (auto v : unprobed) c.push_back(d.node(v));
  return c;
}

double kmedian_outlier_value(const KMedianInstance& inst, const ExtendedMetric& d,
                             const IndexSet& outliers) {
  const auto kept = complement(outliers, inst.size());
  std::vector<std::size_t> clients;
  for (auto v : kept) clients.push_back(d.node(v));
  return kmedian_solve(d, clients, center_candidates(inst, d, kept), inst.k).value;
}

OutlierSelection outlier_kmedian(const KMedianInstance& inst, const ExtendedMetric& d) {
  const std::size_t n = inst.size();
  const auto costs = inst.costs();
  OutlierSelection best;
  best.value = kInf;

  if (n <= kExhaustiveOutlierNodes) {
    best.exhaustive = true;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const auto T = mask_to_set(mask, n);
      const double c = set_cost(T, costs);
      if (!within_budget(c, inst.budget)) continue;
      // Removing a client never raises the optimum, so only maximal sets matter.
      bool maximal = true;
      for (std::size_t i = 0; i < n && maximal; ++i)
        if (!(mask >> i & 1U) && within_budget(c + costs[i], inst.budget)) maximal = false;
      if (!maximal) continue;
      const double v = kmedian_outlier_value(inst, d, T);
      if (v < best.value - 1e-12 || (v <= best.value + 1e-12 && c < best.cost)) {
        best.outliers = T;
        best.cost = c;
        best.value = v;
      }
    }
    return best;
  }

  const double budget = 5.0 * inst.budget;
  best.value = kmedian_outlier_value(inst, d, {});
  std::vector<bool> out(n, false);
  for (;;) {
    double best_rate = 0.0, best_value = best.value;
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (out[i] || !within_budget(best.cost + costs[i], budget)) continue;
      auto T = best.outliers;
      T.insert(std::upper_bound(T.begin(), T.end(), i), i);
      const double v = kmedian_outlier_value(inst, d, T);
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

PolicyValue kmedian_policy_value(const KMedianInstance& inst, const ExtendedMetric& d,
                                 const IndexSet& probed, const EvalOptions& opts) {
  const auto unprobed = complement(probed, inst.size());
  const auto candidates = center_candidates(inst, d, unprobed);
  return expect_over_locations(inst.nodes, probed, opts, [&](std::span<const std::size_t> at) {
    std::vector<std::size_t> clients(at.begin(), at.end());
    for (auto v : unprobed) clients.push_back(d.node(v));
    return kmedian_solve(d, clients, candidates, inst.k).value;
  });
}

KMedianPolicy kmedian_nonadaptive(const KMedianInstance& inst, const ExtendedMetric& d,
                                  const EvalOptions& opts) {
  inst.validate();
  KMedianPolicy p;
  p.selection = outlier_kmedian(inst, d);
  p.value = kmedian_policy_value(inst, d, p.selection.outliers, opts);
  return p;
}

RecombinantCheck recombinant_check_kmedian(const KMedianInstance& inst, const ExtendedMetric& d,
                                           const IndexSet& A, std::span<const std::size_t> at,
                                           double enum_cap) {
  RecombinantCheck r;
  const auto rest = complement(A, inst.size());
  std::vector<std::size_t> mixed(at.begin(), at.end()), alone;
  for (auto v : rest) {
    mixed.push_back(d.node(v));
    alone.push_back(d.node(v));
  }
  const auto cand = center_candidates(inst, d, rest);
  r.q1 = kmedian_exhaustive(d, mixed, cand, inst.k).value;
  r.q2 = alone.empty() ? 0.0 : kmedian_exhaustive(d, alone, cand, inst.k).value;

  const auto all_cand = center_candidates(inst, d, {});
  std::vector<const DiscreteDist*> ds;
  for (auto v : rest) ds.push_back(&inst.nodes[v].location);
  JointEnumerator e(ds, enum_cap);
  std::vector<std::size_t> scenario(at.begin(), at.end());
  scenario.resize(at.size() + rest.size());
  while (e.next()) {
    for (std::size_t k = 0; k < rest.size(); ++k)
      scenario[at.size() + k] = static_cast<std::size_t>(e.values()[k]);
    r.q3 += e.prob() * kmedian_exhaustive(d, scenario, all_cand, inst.k).value;
  }
  r.holds = r.q1 <= 5.0 * r.q2 + 4.0 * r.q3 + 1e-9;
  return r;
}

ProbingModel kmedian_model(const KMedianInstance& inst, const ExtendedMetric& d) {
  ProbingModel model;
  for (const auto& v : inst.nodes) {
    model.dists.push_back(v.location);
    model.costs.push_back(v.cost);
  }
  model.stop_value = [&inst, &d](Outcome obs) {
    std::vector<std::size_t> clients;
    IndexSet unprobed;
    for (std::size_t v = 0; v < obs.size(); ++v) {
      if (obs[v] >= 0) {
        clients.push_back(static_cast<std::size_t>(
            inst.nodes[v].location.value(static_cast<std::size_t>(obs[v]))));
      } else {
        clients.push_back(d.node(v));
        unprobed.push_back(v);
      }
    }
    return kmedian_solve(d, clients, center_candidates(inst, d, unprobed), inst.k).value;
  };
  model.outlier_value = [&inst, &d](const std::vector<bool>& out) {
    IndexSet T;
    for (std::size_t v = 0; v < out.size(); ++v)
      if (out[v]) T.push_back(v);
    return kmedian_outlier_value(inst, d, T);
  };
  return model;
}

}  // namespace stochprobe
