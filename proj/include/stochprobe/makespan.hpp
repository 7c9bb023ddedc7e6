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

// Makespan on m identical machines with probeable job sizes.
//
// A job X is split at a threshold t into Y = X/t when X <= t (else 0) and
// Z = X when X > t (else 0). With
//
//   eta(t) = log E[m^Y] / log m,     f(t) = E[Z] + (t/m) eta(t),
//
// a threshold t is accepted when the unprobed jobs satisfy sum f <= t/2.
// The probe set is the knapsack that removes the most f mass within budget;
// unprobed jobs are list-scheduled on eta, probed jobs on their observed
// sizes, and the two schedules are stacked machine by machine.

#ifndef STOCHPROBE_MAKESPAN_HPP
#define STOCHPROBE_MAKESPAN_HPP

#include <span>
#include <vector>

#include "stochprobe/common.hpp"
#include "stochprobe/dist.hpp"
#include "stochprobe/oracle.hpp"

namespace stochprobe {

struct MakespanJob {
  DiscreteDist size;
  double cost = 1.0;
};

struct MakespanInstance {
  std::vector<MakespanJob> jobs;
  int machines = 2;
  double budget = 0.0;

  std::size_t size() const { return jobs.size(); }
  std::vector<double> costs() const;
  /// Throws ValidationError: no jobs, m < 2, negative cost, budget below max cost.
  void validate() const;
};

struct TruncationMoments {
  double ez = 0.0;   ///< E[Z_t]
  double eta = 0.0;  ///< effective size
  double f(double t, int m) const { return ez + t / m * eta; }
};

TruncationMoments truncation_moments(const DiscreteDist& d, double t, int m);

struct ThresholdProfile {
  double t = 0.0;
  std::vector<TruncationMoments> jobs;
  std::vector<double> f;
};

ThresholdProfile threshold_profile(const MakespanInstance& inst, double t);

/// Sum of f_i(t) over jobs outside `exclude`.
double f_total(const MakespanInstance& inst, double t, const IndexSet& exclude);

/// 0/1 knapsack by profit-scaled dynamic programming. Profits are rounded down
/// to multiples of `scale`; the result loses less than n * scale profit against
/// the optimum. Items are then added greedily while budget remains.
IndexSet knapsack_scaled(std::span<const double> profits, std::span<const double> costs,
                         double capacity, double scale);

struct KnapsackDecision {
  bool feasible = false;
  IndexSet outliers;
  double removed = 0.0;    ///< f mass removed
  double remaining = 0.0;  ///< f mass left on unprobed jobs
};

/// Removes approximately the most f_i(t) within budget; feasible when the
/// remainder is at most (t/2)(1 + eps).
KnapsackDecision outlier_knapsack(const MakespanInstance& inst, double t, double budget,
                                  double eps);

struct ThresholdSearch {
  double t = 0.0;
  IndexSet outliers;
  double grid_floor = 0.0;
  double grid_cap = 0.0;
  std::size_t steps = 0;
};

/// Grid floor max(max_i E[X_i], sum_i E[X_i] / m) / 4.
double threshold_grid_floor(const MakespanInstance& inst);
/// Grid cap sum_i max X_i.
double threshold_grid_cap(const MakespanInstance& inst);

/// Smallest t on {floor (1+eps)^k} (then the cap) with a feasible knapsack.
ThresholdSearch find_tstar(const MakespanInstance& inst, double budget, double eps);

/// Smallest grid t at which the jobs outside `probed` fit within (t/2)(1+eps).
double threshold_for_set(const MakespanInstance& inst, const IndexSet& probed, double eps);

/// List scheduling in input order onto the least-loaded machine (lowest index on ties).
std::vector<int> graham_schedule(std::span<const double> sizes, int machines);

std::vector<double> machine_loads(std::span<const int> assignment,
                                  std::span<const double> sizes, int machines);
double makespan_of(std::span<const int> assignment, std::span<const double> sizes,
                   int machines);

/// Two-phase policy for a fixed probe set.
struct MakespanPolicy {
  IndexSet probe_set;
  double t = 0.0;
  std::vector<int> unprobed_machine;  ///< eta-based machine per job; -1 for probed jobs
};

MakespanPolicy makespan_policy_for_set(const MakespanInstance& inst, const IndexSet& probed,
                                       double t);

struct MakespanRealization {
  double makespan = 0.0;
  double probed_makespan = 0.0;    ///< phase one alone
  double unprobed_makespan = 0.0;  ///< phase two alone
};

/// Applies the policy to one full realization of job sizes.
MakespanRealization run_makespan_policy(const MakespanInstance& inst, const MakespanPolicy& p,
                                        std::span<const double> sizes);

struct MakespanEvaluation {
  PolicyValue value;
  std::size_t realizations = 0;
  std::size_t recombinant_violations = 0;  ///< realizations where stacking beat the sum bound
};

/// Exact over all joint outcomes when their count is <= opts.enum_cap,
/// otherwise Monte Carlo.
MakespanEvaluation evaluate_makespan_policy(const MakespanInstance& inst,
                                            const MakespanPolicy& p, const EvalOptions& opts);

struct MakespanResult {
  MakespanPolicy policy;
  ThresholdSearch search;
  MakespanEvaluation eval;
};

MakespanResult makespan_nonadaptive(const MakespanInstance& inst, double eps,
                                    const EvalOptions& opts);

/// max(sum_i E[X_i] / m, max_i E[X_i]): a lower bound for every policy.
double makespan_no_probe_floor(const MakespanInstance& inst);

/// Oracle adapter; stop values minimize over all m^n assignments.
ProbingModel makespan_model(const MakespanInstance& inst);

}  // namespace stochprobe

#endif  // STOCHPROBE_MAKESPAN_HPP
