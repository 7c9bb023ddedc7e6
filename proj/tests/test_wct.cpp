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

#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <vector>

#include "stochprobe/errors.hpp"
#include "stochprobe/generators.hpp"
#include "stochprobe/oracle.hpp"
#include "stochprobe/wct.hpp"

using namespace stochprobe;

namespace {

// Simulated Smith schedule: sort by w/l and add up completion times.
double simulate(std::span<const double> w, std::span<const double> l) {
  return weighted_completion_time(smith_order(w, l), w, l);
}

// Brute force: average over every joint outcome of the probed jobs.
double brute_policy_value(const WctInstance& inst, const IndexSet& S) {
  std::vector<DiscreteDist> ds;
  for (auto i : S) ds.push_back(inst.jobs[i].size);
  std::vector<double> w, l = inst.means();
  for (const auto& j : inst.jobs) w.push_back(j.weight);
  double total = 0.0;
  for (const auto& o : enumerate_joint(ds)) {
    for (std::size_t k = 0; k < S.size(); ++k) l[S[k]] = o.values[k];
    total += o.prob * simulate(w, l);
  }
  return total;
}

WctInstance deterministic(std::vector<double> sizes, std::vector<double> weights, double budget) {
  WctInstance inst;
  for (std::size_t i = 0; i < sizes.size(); ++i)
    inst.jobs.push_back({DiscreteDist::point(sizes[i]), weights[i], 1.0});
  inst.budget = budget;
  return inst;
}

}  // namespace

TEST_CASE("smith order") {
  using V = std::vector<double>;
  CHECK(smith_order(V{1, 1}, V{2, 1}) == std::vector<std::size_t>{1, 0});
  CHECK(smith_order(V{2, 1}, V{2, 1}) == std::vector<std::size_t>{0, 1});
  CHECK(smith_order(V{1, 9}, V{0, 5}).front() == 0);
  CHECK(smith_order(V{1, 3, 2}, V{0, 0, 0}) == std::vector<std::size_t>{1, 2, 0});
}

TEST_CASE("value given a realization") {
  WctInstance one;
  one.jobs.push_back({DiscreteDist({{2.0, 0.5}, {5.0, 0.5}}), 1.0, 1.0});
  one.budget = 1.0;
  const std::vector<double> v{5.0};
  CHECK(wct_value_given_realization(one, {0}, v) == doctest::Approx(5.0));

  const auto two = deterministic({1, 2}, {1, 1}, 1);
  CHECK(wct_value_given_realization(two, {}, {}) == doctest::Approx(4.0));

  const auto b = gen_benefit_instance(20);
  CHECK(wct_value_given_realization(b, {}, {}) == doctest::Approx(10.5).epsilon(1e-12));
}

TEST_CASE("closed form equals the simulated schedule") {
  Rng rng({3, 0});
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    std::vector<double> w, l;
    for (std::size_t i = 0; i < n; ++i) {
      w.push_back(rng.below(4) == 0 ? 0.0 : rng.uniform() * 5.0);
      l.push_back(rng.below(4) == 0 ? 0.0 : rng.uniform() * 10.0);
    }
    CHECK(smith_value(w, l) == doctest::Approx(simulate(w, l)).epsilon(1e-12));
  }
}

TEST_CASE("policy value matches joint enumeration for every probe set") {
  Rng rng({5, 0});
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = random_wct_instance(rng, 4, 3);
    for (std::uint64_t mask = 0; mask < 16; ++mask) {
      const auto S = mask_to_set(mask, 4);
      CHECK(wct_policy_value(inst, S) == doctest::Approx(brute_policy_value(inst, S)).epsilon(1e-9));
    }
  }
}

TEST_CASE("benefit instance") {
  const auto b2 = gen_benefit_instance(2);
  REQUIRE(b2.size() == 2);
  CHECK(b2.jobs[0].size.prob(1) == doctest::Approx(0.5));
  for (std::size_t n : {10, 20, 40}) {
    const auto b = gen_benefit_instance(n);
    const double nn = static_cast<double>(n);
    CHECK(wct_policy_value(b, {}) == doctest::Approx((nn + 1) / 2).epsilon(1e-12));
    CHECK(wct_policy_value(b, full_set(n)) == doctest::Approx((3 - 1 / nn) / 2).epsilon(1e-12));
  }
  CHECK_THROWS(gen_benefit_instance(1));
}

TEST_CASE("partition inequality for deterministic jobs") {
  // For alpha_i = l_i / w_i, pair terms within the parts dominate the cross terms.
  Rng rng({17, 0});
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(12);
    std::vector<double> w(n), l(n);
    std::vector<bool> inA(n);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.01 + rng.uniform() * 10.0;
      l[i] = rng.uniform() * 10.0;
      inA[i] = rng.below(2) == 1;
    }
    double within = 0.0, across = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        const double term = w[i] * w[j] * std::min(l[i] / w[i], l[j] / w[j]);
        (inA[i] == inA[j] ? within : across) += term;
      }
    violations += across > within + 1e-9;
  }
  CHECK(violations == 0);
}

TEST_CASE("mixing probed and unprobed schedules loses at most a factor two") {
  Rng rng({19, 0});
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto inst = random_wct_instance(rng, 1 + rng.below(7), 3);
    const std::size_t n = inst.size();
    const auto A = mask_to_set(rng.below(std::uint64_t{1} << n), n);
    std::vector<double> vA, wA, wB, lB;
    for (auto i : A) {
      vA.push_back(sample(inst.jobs[i].size, rng));
      wA.push_back(inst.jobs[i].weight);
    }
    for (auto i : complement(A, n)) {
      wB.push_back(inst.jobs[i].weight);
      lB.push_back(expectation(inst.jobs[i].size));
    }
    const double mixed = wct_value_given_realization(inst, A, vA);
    violations += mixed > 2.0 * (smith_value(wA, vA) + smith_value(wB, lB)) + 1e-9;
  }
  CHECK(violations == 0);
}

TEST_CASE("outlier LP trivial cases") {
  const auto zero = deterministic({0, 0, 0}, {1, 2, 3}, 1);
  CHECK(outlier_lp_solve(zero).lp_value == doctest::Approx(0.0));

  auto all = deterministic({1, 2, 3}, {1, 1, 1}, 3);
  const auto sol = outlier_lp_solve(all);
  CHECK(sol.lp_value == 0.0);
  CHECK(sol.z.minCoeff() == 1.0);
  CHECK(round_outliers(sol).size() == 3);
}

TEST_CASE("outlier LP matches a grid search on three jobs") {
  Rng rng({23, 0});
  for (int trial = 0; trial < 5; ++trial) {
    auto inst = random_wct_instance(rng, 3, 3);
    for (auto& j : inst.jobs) j.cost = 1.0;
    inst.budget = 1.0;
    const auto sol = outlier_lp_solve(inst);
    CHECK(sol.z.dot(Eigen::Vector3d::Ones()) <= 1.0 + 1e-7);
    CHECK(sol.lp_value == doctest::Approx(outlier_lp_objective(inst, sol.z)).epsilon(1e-7));

    const int steps = 200;
    const double h = 1.0 / steps;
    double grid = 1e300;
    Eigen::VectorXd z(3);
    for (int a = 0; a <= steps; ++a)
      for (int b = 0; a + b <= steps; ++b)
        for (int c = 0; a + b + c <= steps; ++c) {
          z << a * h, b * h, c * h;
          grid = std::min(grid, outlier_lp_objective(inst, z));
        }
    // Rounding the optimum down onto the grid moves the objective by at most
    // h times the sum of coefficient magnitudes.
    const auto mu = inst.means();
    double slope = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      slope += inst.jobs[i].weight * mu[i];
      for (std::size_t j = i + 1; j < 3; ++j)
        slope += 2.0 * std::min(inst.jobs[j].weight * mu[i], inst.jobs[i].weight * mu[j]);
    }
    CHECK(sol.lp_value <= grid + 1e-7);
    CHECK(sol.lp_value >= grid - h * slope - 1e-7);
  }
}

TEST_CASE("threshold rounding") {
  OutlierLpSolution s;
  s.z = Eigen::Vector3d(0.5, 0.2, 1.0 / 3.0);
  CHECK(round_outliers(s) == IndexSet{0, 2});
  s.z = Eigen::Vector3d::Zero();
  CHECK(round_outliers(s).empty());
  s.z = Eigen::Vector3d::Ones();
  CHECK(round_outliers(s) == IndexSet{0, 1, 2});
}

TEST_CASE("rounding stays within three times the LP") {
  Rng rng({29, 0});
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = random_wct_instance(rng, 2 + rng.below(5), 3);
    const auto sol = outlier_lp_solve(inst);
    const auto S = round_outliers(sol);
    CHECK(set_cost(S, inst.costs()) <= 3.0 * inst.budget + 1e-9);
    CHECK(wct_outlier_value(inst, S) <= 3.0 * sol.lp_value + 1e-9);
    const auto exact = exact_outlier_opt(wct_model(inst), inst.budget);
    CHECK(sol.lp_value <= exact.value + 1e-7);
  }
}

TEST_CASE("non-adaptive strategy") {
  const auto b = wct_nonadaptive(gen_benefit_instance(20));
  CHECK(b.probe_set.size() == 20);
  CHECK(b.value == doctest::Approx(1.475).epsilon(1e-12));

  const auto det = deterministic({3, 1, 4, 1}, {1, 2, 1, 3}, 1);
  const auto p = wct_nonadaptive(det);
  CHECK(p.value == doctest::Approx(wct_policy_value(det, {})).epsilon(1e-12));

  // One job dominates the objective; the single affordable probe goes to it.
  WctInstance dom;
  dom.jobs.push_back({DiscreteDist({{0.0, 0.5}, {100.0, 0.5}}), 5.0, 1.0});
  dom.jobs.push_back({DiscreteDist::point(1.0), 1.0, 1.0});
  dom.jobs.push_back({DiscreteDist::point(1.0), 1.0, 1.0});
  dom.budget = 1.0;
  const auto q = wct_nonadaptive(dom);
  CHECK(std::all_of(q.probe_set.begin(), q.probe_set.end(), [](std::size_t i) { return i == 0; }));
}

TEST_CASE("instance validation") {
  auto inst = deterministic({1, 2}, {1, 1}, 0.5);
  CHECK_THROWS_AS(inst.validate(), ValidationError);
  inst.budget = 1.0;
  CHECK_NOTHROW(inst.validate());
  inst.jobs[0].weight = -1.0;
  CHECK_THROWS_AS(inst.validate(), ValidationError);
}
