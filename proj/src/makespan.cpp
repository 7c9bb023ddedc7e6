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

#include "stochprobe/makespan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "stochprobe/errors.hpp"

namespace stochprobe {

namespace {

// Upper bound on the scaled-profit DP width.
constexpr double kMaxProfitUnits = 2e6;

}  // namespace

std::vector<double> MakespanInstance::costs() const {
  std::vector<double> c;
  for (const auto& j : jobs) c.push_back(j.cost);
  return c;
}

void MakespanInstance::validate() const {
  if (jobs.empty()) throw ValidationError("items", "at least one job is required");
  if (machines < 2) throw ValidationError("machines", "need at least 2 machines");
  double max_cost = 0.0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!(jobs[i].cost >= 0.0))
      throw ValidationError("items[" + std::to_string(i) + "].cost", "must be >= 0");
    max_cost = std::max(max_cost, jobs[i].cost);
  }
  if (!(budget >= max_cost))
    throw ValidationError("budget", "budget " + std::to_string(budget) +
                                        " is below the largest probe cost " +
                                        std::to_string(max_cost));
}

TruncationMoments truncation_moments(const DiscreteDist& d, double t, int m) {
  TruncationMoments r;
  const double logm = std::log(static_cast<double>(m));
  double mgf = 0.0;  // E[m^Y]
  for (const auto& a : d.atoms()) {
    if (a.value > t) {
      r.ez += a.value * a.prob;
      mgf += a.prob;  // Y = 0
    } else {
      mgf += a.prob * std::exp(logm * a.value / t);
    }
  }
  r.eta = std::max(0.0, std::log(mgf) / logm);
  return r;
}

ThresholdProfile threshold_profile(const MakespanInstance& inst, double t) {
  ThresholdProfile p;
  p.t = t;
  for (const auto& j : inst.jobs) {
    p.jobs.push_back(truncation_moments(j.size, t, inst.machines));
    p.f.push_back(p.jobs.back().f(t, inst.machines));
  }
  return p;
}

double f_total(const MakespanInstance& inst, double t, const IndexSet& exclude) {
  const auto skip = set_to_flags(exclude, inst.size());
  double s = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i)
    if (!skip[i]) s += truncation_moments(inst.jobs[i].size, t, inst.machines).f(t, inst.machines);
  return s;
}

IndexSet knapsack_scaled(std::span<const double> profits, std::span<const double> costs,
                         double capacity, double scale) {
  const std::size_t n = profits.size();
  std::vector<std::int64_t> units(n, 0);
  std::int64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (costs[i] > capacity + 1e-9 || !(scale > 0.0)) continue;
    units[i] = static_cast<std::int64_t>(std::floor(profits[i] / scale));
    total += units[i];
  }

  IndexSet chosen;
  if (total > 0) {
    const auto width = static_cast<std::size_t>(total) + 1;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> min_cost(width, inf);
    std::vector<std::vector<bool>> take(n, std::vector<bool>(width, false));
    min_cost[0] = 0.0;
    std::int64_t reach = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (units[i] == 0) continue;
      for (std::int64_t p = reach; p >= 0; --p) {
        if (std::isinf(min_cost[p])) continue;
        const double c = min_cost[p] + costs[i];
        const auto q = static_cast<std::size_t>(p + units[i]);
        if (c < min_cost[q]) {
          min_cost[q] = c;
          take[i][q] = true;
        }
      }
      reach += units[i];
    }
    std::size_t best = 0;
    for (std::size_t p = width; p-- > 0;)
      if (min_cost[p] <= capacity + 1e-9) {
        best = p;
        break;
      }
    // Walk back: take[i][p] marks the last item that improved cell p while
    // items 0..i were available.
    std::size_t p = best;
    for (std::size_t i = n; i-- > 0 && p > 0;) {
      if (take[i][p]) {
        chosen.push_back(i);
        p -= static_cast<std::size_t>(units[i]);
      }
    }
    std::sort(chosen.begin(), chosen.end());
  }

  // Fill leftover budget; f-mass is nonnegative so this never hurts.
  double used = 0.0;
  for (auto i : chosen) used += costs[i];
  auto in = set_to_flags(chosen, n);
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i)
    if (!in[i]) rest.push_back(i);
  std::stable_sort(rest.begin(), rest.end(),
                   [&](std::size_t a, std::size_t b) { return profits[a] > profits[b]; });
  for (auto i : rest) {
    if (used + costs[i] <= capacity + 1e-9) {
      used += costs[i];
      in[i] = true;
    }
  }
  chosen.clear();
  for (std::size_t i = 0; i < n; ++i)
    if (in[i]) chosen.push_back(i);
  return chosen;
}

KnapsackDecision outlier_knapsack(const MakespanInstance& inst, double t, double budget,
                                  double eps) {
  const auto prof = threshold_profile(inst, t);
  const auto costs = inst.costs();
  const double total = std::accumulate(prof.f.begin(), prof.f.end(), 0.0);
  double max_profit = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i)
    if (costs[i] <= budget + 1e-9) max_profit = std::max(max_profit, prof.f[i]);

  // Additive loss stays below eps * min(max profit, t/2): the first bound gives
  // the (1 - eps) profit guarantee, the second keeps the threshold test sound.
  const double n = static_cast<double>(inst.size());
  double scale = eps * std::min(max_profit, t / 2.0) / n;
  if (scale > 0.0 && total / scale > kMaxProfitUnits) scale = total / kMaxProfitUnits;

  KnapsackDecision d;
  d.outliers = knapsack_scaled(prof.f, costs, budget, scale > 0.0 ? scale : 1.0);
  for (auto i : d.outliers) d.removed += prof.f[i];
  d.remaining = std::max(0.0, total - d.removed);
  d.feasible = d.remaining <= t / 2.0 * (1.0 + eps) + 1e-12;
  return d;
}

double threshold_grid_floor(const MakespanInstance& inst) {
  double sum = 0.0, mx = 0.0;
  for (const auto& j : inst.jobs) {
    const double mu = expectation(j.size);
    sum += mu;
    mx = std::max(mx, mu);
  }
  return std::max(mx, sum / inst.machines) / 4.0;
}

double threshold_grid_cap(const MakespanInstance& inst) {
  double s = 0.0;
  for (const auto& j : inst.jobs) s += j.size.max_value();
  return s;
}

ThresholdSearch find_tstar(const MakespanInstance& inst, double budget, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("eps", "must lie in (0, 1)");
  ThresholdSearch s;
  s.grid_floor = threshold_grid_floor(inst);
  s.grid_cap = threshold_grid_cap(inst);
  if (s.grid_cap <= 0.0) return s;  // every job is identically zero

  double t = s.grid_floor;
  for (; t < s.grid_cap; t *= 1.0 + eps, ++s.steps) {
    auto d = outlier_knapsack(inst, t, budget, eps);
    if (d.feasible) {
      s.t = t;
      s.outliers = std::move(d.outliers);
      return s;
    }
  }
  auto d = outlier_knapsack(inst, s.grid_cap, budget, eps);
  if (!d.feasible)
    throw ConsistencyError("no feasible threshold up to the sum of maximum sizes");
  s.t = s.grid_cap;
  s.outliers = std::move(d.outliers);
  return s;
}

double threshold_for_set(const MakespanInstance& inst, const IndexSet& probed, double eps) {
  const double floor = threshold_grid_floor(inst);
  const double cap = threshold_grid_cap(inst);
  if (cap <= 0.0) return 0.0;
  for (double t = floor; t < cap; t *= 1.0 + eps)
    if (f_total(inst, t, probed) <= t / 2.0 * (1.0 + eps) + 1e-12) return t;
  return cap;
}

std::vector<int> graham_schedule(std::span<const double> sizes, int machines) {
  std::vector<double> load(static_cast<std::size_t>(machines), 0.0);
  std::vector<int> assign;
  assign.reserve(sizes.size());
  for (double s : sizes) {
    const auto k = static_cast<std::size_t>(std::min_element(load.begin(), load.end()) - load.begin());
    load[k] += s;
    assign.push_back(static_cast<int>(k));
  }
  return assign;
}

std::vector<double> machine_loads(std::span<const int> assignment,
                                  std::span<const double> sizes, int machines) {
  std::vector<double> load(static_cast<std::size_t>(machines), 0.0);
  for (std::size_t j = 0; j < assignment.size(); ++j)
    if (assignment[j] >= 0) load[static_cast<std::size_t>(assignment[j])] += sizes[j];
  return load;
}

double makespan_of(std::span<const int> assignment, std::span<const double> sizes,
                   int machines) {
  const auto load = machine_loads(assignment, sizes, machines);
  return *std::max_element(load.begin(), load.end());
}

MakespanPolicy makespan_policy_for_set(const MakespanInstance& inst, const IndexSet& probed,
                                       double t) {
  MakespanPolicy p;
  p.probe_set = probed;
  p.t = t;
  p.unprobed_machine.assign(inst.size(), -1);
  const auto rest = complement(probed, inst.size());
  std::vector<double> eta;
  for (auto i : rest)
    eta.push_back(t > 0.0 ? truncation_moments(inst.jobs[i].size, t, inst.machines).eta : 0.0);
  const auto assign = graham_schedule(eta, inst.machines);
  for (std::size_t k = 0; k < rest.size(); ++k) p.unprobed_machine[rest[k]] = assign[k];
  return p;
}

MakespanRealization run_makespan_policy(const MakespanInstance& inst, const MakespanPolicy& p,
                                        std::span<const double> sizes) {
  const int m = inst.machines;
  std::vector<double> observed;
  for (auto i : p.probe_set) observed.push_back(sizes[i]);
  const auto phase1 = graham_schedule(observed, m);
  const auto load1 = machine_loads(phase1, observed, m);
  const auto load2 = machine_loads(p.unprobed_machine, sizes, m);
  MakespanRealization r;
  for (std::size_t k = 0; k < static_cast<std::size_t>(m); ++k) {
    r.makespan = std::max(r.makespan, load1[k] + load2[k]);
    r.probed_makespan = std::max(r.probed_makespan, load1[k]);
    r.unprobed_makespan = std::max(r.unprobed_makespan, load2[k]);
  }
  return r;
}

MakespanEvaluation evaluate_makespan_policy(const MakespanInstance& inst,
                                            const MakespanPolicy& p, const EvalOptions& opts) {
  MakespanEvaluation ev;
  ev.value.probe_set = p.probe_set;
  ev.value.probe_cost = set_cost(p.probe_set, inst.costs());
  std::vector<DiscreteDist> ds;
  for (const auto& j : inst.jobs) ds.push_back(j.size);

  auto violates = [](const MakespanRealization& r) {
    return r.makespan > r.probed_makespan + r.unprobed_makespan + 1e-9;
  };

  if (joint_size(std::span<const DiscreteDist>(ds)) <= opts.enum_cap) {
    JointEnumerator e(ds, opts.enum_cap);
    while (e.next()) {
      const auto r = run_makespan_policy(inst, p, e.values());
      ev.value.value += e.prob() * r.makespan;
      ev.recombinant_violations += violates(r);
      ++ev.realizations;
    }
    ev.value.exact = true;
    return ev;
  }

  std::atomic<std::size_t> bad{0};
  const auto est = monte_carlo(opts.mc_trials, SeedSpec{opts.seed, opts.stream}, opts.threads,
                               [&](Rng& rng) {
                                 std::vector<double> x(ds.size());
                                 for (std::size_t i = 0; i < ds.size(); ++i) x[i] = sample(ds[i], rng);
                                 const auto r = run_makespan_policy(inst, p, x);
                                 if (violates(r)) ++bad;
                                 return r.makespan;
                               });
  ev.value.value = est.mean;
  ev.value.half_width = est.half_width;
  ev.value.exact = false;
  ev.realizations = est.trials;
  ev.recombinant_violations = bad.load();
  return ev;
}

MakespanResult makespan_nonadaptive(const MakespanInstance& inst, double eps,
                                    const EvalOptions& opts) {
  inst.validate();
  MakespanResult r;
  r.search = find_tstar(inst, inst.budget, eps);
  r.policy = makespan_policy_for_set(inst, r.search.outliers, r.search.t);
  r.eval = evaluate_makespan_policy(inst, r.policy, opts);
  return r;
}

double makespan_no_probe_floor(const MakespanInstance& inst) {
  double sum = 0.0, mx = 0.0;
  for (const auto& j : inst.jobs) {
    const double mu = expectation(j.size);
    sum += mu;
    mx = std::max(mx, mu);
  }
  return std::max(sum / inst.machines, mx);
}

namespace {

// min over assignments of E[max load], with job 0 pinned to machine 0.
double best_expected_makespan(std::span<const DiscreteDist> dists, int m) {
  const std::size_t n = dists.size();
  if (n == 0) return 0.0;
  const auto outcomes = enumerate_joint(dists, 1e6);
  std::uint64_t count = 1;
  for (std::size_t i = 1; i < n; ++i) count *= static_cast<std::uint64_t>(m);
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> assign(n, 0);
  std::vector<double> load(static_cast<std::size_t>(m));
  for (std::uint64_t code = 0; code < count; ++code) {
    std::uint64_t c = code;
    for (std::size_t i = 1; i < n; ++i) {
      assign[i] = static_cast<int>(c % static_cast<std::uint64_t>(m));
      c /= static_cast<std::uint64_t>(m);
    }
    double ev = 0.0;
    for (const auto& o : outcomes) {
      std::fill(load.begin(), load.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) load[static_cast<std::size_t>(assign[i])] += o.values[i];
      ev += o.prob * *std::max_element(load.begin(), load.end());
    }
    best = std::min(best, ev);
  }
  return best;
}

}  // namespace

ProbingModel makespan_model(const MakespanInstance& inst) {
  ProbingModel model;
  for (const auto& j : inst.jobs) {
    model.dists.push_back(j.size);
    model.costs.push_back(j.cost);
  }
  const int m = inst.machines;
  model.stop_value = [dists = model.dists, m](Outcome obs) {
    std::vector<DiscreteDist> eff;
    for (std::size_t i = 0; i < obs.size(); ++i)
      eff.push_back(obs[i] >= 0 ? DiscreteDist::point(dists[i].value(static_cast<std::size_t>(obs[i])))
                                : dists[i]);
    return best_expected_makespan(eff, m);
  };
  model.outlier_value = [dists = model.dists, m](const std::vector<bool>& out) {
    std::vector<DiscreteDist> kept;
    for (std::size_t i = 0; i < out.size(); ++i)
      if (!out[i]) kept.push_back(dists[i]);
    return best_expected_makespan(kept, m);
  };
  return model;
}

}  // namespace stochprobe
