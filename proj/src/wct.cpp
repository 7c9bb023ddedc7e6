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

#include "stochprobe/wct.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "stochprobe/errors.hpp"
#include "stochprobe/simplex.hpp"

namespace stochprobe {

std::vector<double> WctInstance::costs() const {
  std::vector<double> c;
  for (const auto& j : jobs) c.push_back(j.cost);
  return c;
}

std::vector<double> WctInstance::means() const {
  std::vector<double> m;
  for (const auto& j : jobs) m.push_back(expectation(j.size));
  return m;
}

void WctInstance::validate() const {
  if (jobs.empty()) throw ValidationError("items", "at least one job is required");
  double max_cost = 0.0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const std::string f = "items[" + std::to_string(i) + "]";
    if (!(jobs[i].weight >= 0.0)) throw ValidationError(f + ".weight", "must be >= 0");
    if (!(jobs[i].cost >= 0.0)) throw ValidationError(f + ".cost", "must be >= 0");
    max_cost = std::max(max_cost, jobs[i].cost);
  }
  if (!(budget >= max_cost))
    throw ValidationError("budget", "budget " + std::to_string(budget) +
                                        " is below the largest probe cost " +
                                        std::to_string(max_cost));
}

std::vector<std::size_t> smith_order(std::span<const double> weights,
                                     std::span<const double> sizes) {
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const bool za = sizes[a] == 0.0, zb = sizes[b] == 0.0;
    if (za != zb) return za;
    if (za) {
      if (weights[a] != weights[b]) return weights[a] > weights[b];
      return a < b;
    }
    // w_a / l_a > w_b / l_b without dividing.
    const double lhs = weights[a] * sizes[b], rhs = weights[b] * sizes[a];
    if (lhs != rhs) return lhs > rhs;
    return a < b;
  });
  return order;
}

double weighted_completion_time(std::span<const std::size_t> order,
                                std::span<const double> weights,
                                std::span<const double> sizes) {
  double t = 0.0, total = 0.0;
  for (auto j : order) {
    t += sizes[j];
    total += weights[j] * t;
  }
  return total;
}

double smith_value(std::span<const double> weights, std::span<const double> sizes) {
  double v = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    v += weights[i] * sizes[i];
    for (std::size_t j = i + 1; j < sizes.size(); ++j)
      v += std::min(weights[i] * sizes[j], weights[j] * sizes[i]);
  }
  return v;
}

double wct_value_given_realization(const WctInstance& inst, const IndexSet& probed,
                                   std::span<const double> observed) {
  if (observed.size() != probed.size())
    throw ValidationError("observed", "one value per probed job is required");
  std::vector<double> w, l = inst.means();
  for (const auto& j : inst.jobs) w.push_back(j.weight);
  for (std::size_t k = 0; k < probed.size(); ++k) l[probed[k]] = observed[k];
  return smith_value(w, l);
}

double wct_policy_value(const WctInstance& inst, const IndexSet& probed) {
  const std::size_t n = inst.size();
  const auto is_probed = set_to_flags(probed, n);
  const auto mu = inst.means();
  double v = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ji = inst.jobs[i];
    v += ji.weight * mu[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& jj = inst.jobs[j];
      if (is_probed[i] && is_probed[j]) {
        v += pairwise_expect_min(ji.size, ji.weight, jj.size, jj.weight);
      } else if (is_probed[i]) {
        v += pairwise_expect_min(ji.size, ji.weight, DiscreteDist::point(mu[j]), jj.weight);
      } else if (is_probed[j]) {
        v += pairwise_expect_min(DiscreteDist::point(mu[i]), ji.weight, jj.size, jj.weight);
      } else {
        v += std::min(jj.weight * mu[i], ji.weight * mu[j]);
      }
    }
  }
  return v;
}

double wct_outlier_value(const WctInstance& inst, const IndexSet& outliers) {
  const auto mu = inst.means();
  std::vector<double> w, l;
  for (auto i : complement(outliers, inst.size())) {
    w.push_back(inst.jobs[i].weight);
    l.push_back(mu[i]);
  }
  return smith_value(w, l);
}

namespace {

struct LpCoefficients {
  std::vector<double> keep;                 // b_i = w_i mu_i
  Eigen::MatrixXd pair;                     // a_ij = min(w_j mu_i, w_i mu_j)
};

LpCoefficients lp_coefficients(const WctInstance& inst) {
  const std::size_t n = inst.size();
  const auto mu = inst.means();
  LpCoefficients k;
  k.pair = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    k.keep.push_back(inst.jobs[i].weight * mu[i]);
    for (std::size_t j = i + 1; j < n; ++j)
      k.pair(i, j) = std::min(inst.jobs[j].weight * mu[i], inst.jobs[i].weight * mu[j]);
  }
  return k;
}

}  // namespace

double outlier_lp_objective(const WctInstance& inst, const Eigen::VectorXd& z) {
  const auto k = lp_coefficients(inst);
  const std::size_t n = inst.size();
  double v = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v += (1.0 - z(i)) * k.keep[i];
    for (std::size_t j = i + 1; j < n; ++j)
      v += std::max(0.0, 1.0 - z(i) - z(j)) * k.pair(i, j);
  }
  return v;
}

OutlierLpSolution outlier_lp_solve(const WctInstance& inst) {
  const std::size_t n = inst.size();
  const auto costs = inst.costs();
  OutlierLpSolution sol;
  if (std::accumulate(costs.begin(), costs.end(), 0.0) <= inst.budget) {
    sol.z = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
    sol.lp_value = outlier_lp_objective(inst, sol.z);
    return sol;
  }

  const auto k = lp_coefficients(inst);
  // Pairs with a zero coefficient never bind the objective, so their e_ij
  // columns and covering rows are dropped.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (k.pair(i, j) > 0.0) pairs.emplace_back(i, j);

  const auto nv = static_cast<Eigen::Index>(n + pairs.size());
  const auto nr = static_cast<Eigen::Index>(1 + n + pairs.size());
  LinearProgram<double> lp;
  lp.A = Eigen::MatrixXd::Zero(nr, nv);
  lp.b = Eigen::VectorXd::Zero(nr);
  lp.c = Eigen::VectorXd::Zero(nv);
  lp.rel.assign(static_cast<std::size_t>(nr), Relation::kLessEqual);

  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    lp.c(ii) = -k.keep[i];
    lp.A(0, ii) = costs[i];
    lp.A(1 + ii, ii) = 1.0;
    lp.b(1 + ii) = 1.0;
  }
  lp.b(0) = inst.budget;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto col = static_cast<Eigen::Index>(n + p);
    const auto row = static_cast<Eigen::Index>(1 + n + p);
    lp.c(col) = k.pair(pairs[p].first, pairs[p].second);
    lp.A(row, col) = 1.0;
    lp.A(row, static_cast<Eigen::Index>(pairs[p].first)) = 1.0;
    lp.A(row, static_cast<Eigen::Index>(pairs[p].second)) = 1.0;
    lp.b(row) = 1.0;
    lp.rel[static_cast<std::size_t>(row)] = Relation::kGreaterEqual;
  }

  const auto res = solve_lp(lp);
  sol.z = res.x.head(static_cast<Eigen::Index>(n)).cwiseMax(0.0).cwiseMin(1.0);
  sol.lp_value = outlier_lp_objective(inst, sol.z);
  return sol;
}

IndexSet round_outliers(const OutlierLpSolution& sol) {
  IndexSet s;
  for (Eigen::Index i = 0; i < sol.z.size(); ++i)
    if (sol.z(i) >= 1.0 / 3.0 - 1e-9) s.push_back(static_cast<std::size_t>(i));
  return s;
}

WctProbePolicy wct_nonadaptive(const WctInstance& inst) {
  inst.validate();
  WctProbePolicy p;
  p.lp = outlier_lp_solve(inst);
  p.probe_set = round_outliers(p.lp);
  p.probe_cost = set_cost(p.probe_set, inst.costs());
  p.value = wct_policy_value(inst, p.probe_set);
  return p;
}

WctInstance gen_benefit_instance(std::size_t n) {
  if (n < 2) throw ValidationError("n", "benefit instance needs n >= 2");
  const double q = 1.0 / static_cast<double>(n);
  WctInstance inst;
  for (std::size_t i = 0; i < n; ++i)
    inst.jobs.push_back({DiscreteDist({{0.0, 1.0 - q}, {1.0, q}}), 1.0, 1.0});
  inst.budget = static_cast<double>(n);
  return inst;
}

ProbingModel wct_model(const WctInstance& inst) {
  ProbingModel m;
  std::vector<double> w;
  for (const auto& j : inst.jobs) {
    m.dists.push_back(j.size);
    m.costs.push_back(j.cost);
    w.push_back(j.weight);
  }
  const auto mu = inst.means();
  m.stop_value = [m_dists = m.dists, w, mu](Outcome obs) {
    std::vector<double> l = mu;
    for (std::size_t i = 0; i < obs.size(); ++i)
      if (obs[i] >= 0) l[i] = m_dists[i].value(static_cast<std::size_t>(obs[i]));
    return smith_value(w, l);
  };
  m.outlier_value = [w, mu](const std::vector<bool>& out) {
    std::vector<double> ww, ll;
    for (std::size_t i = 0; i < out.size(); ++i)
      if (!out[i]) {
        ww.push_back(w[i]);
        ll.push_back(mu[i]);
      }
    return smith_value(ww, ll);
  };
  m.policy_value = [inst](const IndexSet& s) { return wct_policy_value(inst, s); };
  return m;
}

}  // namespace stochprobe
