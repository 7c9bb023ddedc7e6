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

#include <cstdint>
#include <vector>

#include "stochprobe/errors.hpp"
#include "stochprobe/generators.hpp"
#include "stochprobe/oracle.hpp"
#include "stochprobe/wct.hpp"

using namespace stochprobe;

namespace {

WctInstance deterministic(std::vector<double> sizes, double budget) {
  WctInstance inst;
  for (double s : sizes) inst.jobs.push_back({DiscreteDist::point(s), 1.0, 1.0});
  inst.budget = budget;
  return inst;
}

double leaf_mass(const DecisionTree& t) {
  double m = 0.0;
  for (const auto& n : t.nodes)
    if (n.probe < 0) m += n.prob;
  return m;
}

}  // namespace

TEST_CASE("enumerated policy value agrees with the pairwise evaluator") {
  Rng rng({41, 0});
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = random_wct_instance(rng, 4, 3);
    auto model = wct_model(inst);
    auto slow = model;
    slow.policy_value = nullptr;
    for (std::uint64_t mask = 0; mask < 16; ++mask) {
      const auto S = mask_to_set(mask, 4);
      CHECK(nonadaptive_value(slow, S) == doctest::Approx(nonadaptive_value(model, S)).epsilon(1e-9));
    }
  }
}

TEST_CASE("non-adaptive optimum") {
  const auto b = gen_benefit_instance(6);
  const auto r = nonadaptive_opt(wct_model(b), b.budget);
  // Once five jobs are observed the last one is placed exactly as if probed,
  // so the optimum value is the full-probe value and ties go to five probes.
  CHECK(r.value == doctest::Approx(wct_policy_value(b, full_set(6))).epsilon(1e-12));
  CHECK(r.probe_set.size() >= 5);

  const auto det = deterministic({3, 1, 2}, 3);
  const auto d = nonadaptive_opt(wct_model(det), det.budget);
  CHECK(d.value == doctest::Approx(wct_policy_value(det, {})));
  CHECK(d.probe_set.empty());  // ties go to the cheaper set
}

TEST_CASE("hard-budget adaptive optimum") {
  const auto det = deterministic({3, 1, 2}, 2);
  const auto h = adaptive_opt_hard(wct_model(det), det.budget);
  CHECK(h.value == doctest::Approx(wct_policy_value(det, {})).epsilon(1e-12));

  const auto b = gen_benefit_instance(4);
  const auto model = wct_model(b);
  const auto opt = adaptive_opt_hard(model, b.budget);
  CHECK(opt.value == doctest::Approx(nonadaptive_opt(model, b.budget).value).epsilon(1e-12));
  CHECK(opt.value <= nonadaptive_value(model, full_set(4)) + 1e-12);
}

TEST_CASE("decision trees are consistent") {
  Rng rng({43, 0});
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = random_wct_instance(rng, 2 + rng.below(3), 3);
    const auto model = wct_model(inst);
    const auto h = adaptive_opt_hard(model, inst.budget);
    REQUIRE(h.tree.has_value());
    CHECK(evaluate_tree(model, *h.tree) == doctest::Approx(h.value).epsilon(1e-9));
    CHECK(leaf_mass(*h.tree) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(tree_max_cost(*h.tree) <= inst.budget + 1e-9);
    CHECK(tree_expected_cost(*h.tree) <= tree_max_cost(*h.tree) + 1e-12);
    CHECK(h.value <= nonadaptive_opt(model, inst.budget).value + 1e-9);
  }
}

TEST_CASE("corrupted trees are rejected") {
  const auto b = gen_benefit_instance(3);
  const auto model = wct_model(b);
  auto h = adaptive_opt_hard(model, b.budget);
  REQUIRE(h.tree.has_value());
  auto t = *h.tree;
  REQUIRE(t.nodes[0].probe >= 0);
  // Make a child probe the same job again.
  const auto child = t.nodes[0].children.front();
  if (t.nodes[child].probe >= 0) {
    t.nodes[child].probe = t.nodes[0].probe;
    CHECK_THROWS_AS(evaluate_tree(model, t), ConsistencyError);
  }
  auto u = *h.tree;
  u.nodes[u.nodes[0].children.front()].prob *= 0.5;
  CHECK_THROWS_AS(evaluate_tree(model, u), ConsistencyError);
}

TEST_CASE("soft-budget lower bound") {
  const auto det = deterministic({2, 5, 1}, 1);
  const auto grid = default_lambda_grid();
  CHECK(grid.front() == 0.0);
  CHECK(grid.size() == 22);
  const auto s = adaptive_opt_soft_lb(wct_model(det), det.budget, grid);
  CHECK(s.lower_bound == doctest::Approx(wct_policy_value(det, {})).epsilon(1e-12));

  const auto b = gen_benefit_instance(4);
  const auto model = wct_model(b);
  const auto sb = adaptive_opt_soft_lb(model, 2.0, grid);
  const auto hb = adaptive_opt_hard(model, 2.0);
  CHECK(sb.lower_bound >= 0.0);
  CHECK(sb.lower_bound <= hb.value + 1e-9);
  CHECK(sb.upper_bound == doctest::Approx(hb.value));

  // lambda = 0 alone: probing is free, so the bound is the free-probe optimum.
  const std::vector<double> zero{0.0};
  const auto s0 = adaptive_opt_soft_lb(model, 2.0, zero);
  CHECK(s0.lower_bound == doctest::Approx(adaptive_opt_hard(model, 4.0).value).epsilon(1e-12));
}

TEST_CASE("exact outlier optimum") {
  // Unit weights, sizes 1, 2, 3, one removal: dropping the size-3 job leaves 1 + 3.
  const auto det = deterministic({1, 2, 3}, 1);
  const auto r = exact_outlier_opt(wct_model(det), 1.0);
  CHECK(r.value == doctest::Approx(4.0));
  CHECK(r.probe_set == IndexSet{2});
  const auto none = exact_outlier_opt(wct_model(det), 0.5);
  CHECK(none.value == doctest::Approx(10.0));
  CHECK(none.probe_set.empty());
}

TEST_CASE("outlier optimum is below the adaptive optimum") {
  Rng rng({47, 0});
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = random_wct_instance(rng, 2 + rng.below(3), 3);
    const auto model = wct_model(inst);
    const double opt = adaptive_opt_hard(model, inst.budget).value;
    CHECK(exact_outlier_opt(model, inst.budget).value <= opt + 1e-9);
    for (double beta : {0.5, 1.0, 2.0})
      CHECK(exact_outlier_opt(model, (1 + beta) * inst.budget).value <= (1 + 1 / beta) * opt + 1e-9);
  }
}

TEST_CASE("state cap") {
  const auto b = gen_benefit_instance(10);
  CHECK_THROWS_AS(adaptive_opt_hard(wct_model(b), b.budget, 100.0), EnumerationTooLarge);
}
