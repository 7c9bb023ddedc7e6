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
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "stochprobe/errors.hpp"
#include "stochprobe/gap.hpp"
#include "stochprobe/generators.hpp"
#include "stochprobe/kmedian.hpp"

using namespace stochprobe;

namespace {

// Minimum over every center subset of size <= k, by bitmask.
double brute_kmedian(const ExtendedMetric& d, const std::vector<std::size_t>& clients,
                     const IndexSet& cand, std::size_t k) {
  if (clients.empty()) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << cand.size()); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > k) continue;
    double v = 0.0;
    for (auto c : clients) {
      double m = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < cand.size(); ++j)
        if (mask >> j & 1U) m = std::min(m, d(c, cand[j]));
      v += m;
    }
    best = std::min(best, v);
  }
  return best;
}

IndexSet brute_candidates(const KMedianInstance& inst, const ExtendedMetric& d,
                          const IndexSet& unprobed) {
  if (!inst.arbitrary_centers) return inst.centers;
  IndexSet c = full_set(d.num_points);
  for (auto v : unprobed) c.push_back(d.node(v));
  return c;
}

double brute_policy(const KMedianInstance& inst, const ExtendedMetric& d, const IndexSet& S) {
  std::vector<DiscreteDist> ds;
  for (auto v : S) ds.push_back(inst.nodes[v].location);
  const auto rest = complement(S, inst.size());
  const auto cand = brute_candidates(inst, d, rest);
  double total = 0.0;
  for (const auto& o : enumerate_joint(ds)) {
    std::vector<std::size_t> clients;
    for (double p : o.values) clients.push_back(static_cast<std::size_t>(p));
    for (auto v : rest) clients.push_back(d.node(v));
    total += o.prob * brute_kmedian(d, clients, cand, inst.k);
  }
  return total;
}

PointSet line(std::vector<double> xs) {
  Eigen::MatrixX2d xy(static_cast<Eigen::Index>(xs.size()), 2);
  for (std::size_t i = 0; i < xs.size(); ++i) xy.row(static_cast<Eigen::Index>(i)) << xs[i], 0.0;
  return PointSet::from_coordinates(xy, Norm::kL1);
}

}  // namespace

TEST_CASE("local search examples") {
  const auto ps = line({0, 2});
  const auto d = build_extended_metric(ps, {});
  const std::vector<std::size_t> clients{0, 1};
  CHECK(kmedian_local_search(d, clients, {0, 1}, 2).value == 0.0);
  CHECK(kmedian_local_search(d, clients, {0, 1}, 1).value == doctest::Approx(2.0));
  CHECK(kmedian_exhaustive(d, clients, {0, 1}, 1).value == doctest::Approx(2.0));
}

TEST_CASE("local search within five times the exhaustive optimum") {
  Rng rng({61, 0});
  for (int trial = 0; trial < 60; ++trial) {
    const auto ps = random_point_set(rng, 4 + rng.below(7), Norm::kL2);
    const auto d = build_extended_metric(ps, {});
    std::vector<std::size_t> clients;
    for (std::size_t i = 0; i < 8; ++i) clients.push_back(rng.below(ps.size()));
    const std::size_t k = 1 + rng.below(3);
    const auto cand = full_set(ps.size());
    const double exact = brute_kmedian(d, clients, cand, k);
    CHECK(kmedian_exhaustive(d, clients, cand, k).value == doctest::Approx(exact).epsilon(1e-12));
    const double ls = kmedian_local_search(d, clients, cand, k).value;
    CHECK(ls >= exact - 1e-9);
    CHECK(ls <= 5.0 * exact + 1e-9);
  }
}

TEST_CASE("clients go to their nearest open center") {
  Rng rng({67, 0});
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = random_kmedian_instance(rng, 6, 4, 3, 2);
    const auto d = build_extended_metric(inst.points, inst.nodes);
    std::vector<std::size_t> clients;
    for (std::size_t v = 0; v < inst.size(); ++v) clients.push_back(d.node(v));
    const auto s = kmedian_solve(d, clients, inst.centers, inst.k);
    double total = 0.0;
    for (std::size_t c = 0; c < clients.size(); ++c) {
      for (auto x : s.centers) CHECK(d(clients[c], s.assignment[c]) <= d(clients[c], x));
      total += d(clients[c], s.assignment[c]);
    }
    CHECK(total == doctest::Approx(s.value));
  }
}

TEST_CASE("exhaustive cap") {
  const auto ps = line({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  const auto d = build_extended_metric(ps, {});
  const std::vector<std::size_t> clients{0, 9};
  CHECK_THROWS_AS(kmedian_exhaustive(d, clients, full_set(10), 5, 100), EnumerationTooLarge);
}

TEST_CASE("outlier selection") {
  // Two nodes near point 0 and one far away; removing the far one leaves 0.
  KMedianInstance inst;
  inst.points = line({0, 100});
  inst.nodes = {{DiscreteDist::point(0), 1}, {DiscreteDist::point(0), 1}, {DiscreteDist::point(1), 1}};
  inst.k = 1;
  inst.centers = {0};
  inst.budget = 1;
  const auto d = build_extended_metric(inst.points, inst.nodes);
  CHECK(kmedian_outlier_value(inst, d, {}) == doctest::Approx(100.0));
  const auto sel = outlier_kmedian(inst, d);
  CHECK(sel.exhaustive);
  CHECK(sel.outliers == IndexSet{2});
  CHECK(sel.value == 0.0);

  Rng rng({71, 0});
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = random_kmedian_instance(rng, 5, 5, 2, 2);
    const auto dr = build_extended_metric(r.points, r.nodes);
    const auto s = outlier_kmedian(r, dr);
    CHECK(set_cost(s.outliers, r.costs()) <= r.budget + 1e-9);
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < 32; ++mask) {
      const auto T = mask_to_set(mask, 5);
      if (set_cost(T, r.costs()) > r.budget + 1e-9) continue;
      std::vector<std::size_t> clients;
      for (auto v : complement(T, 5)) clients.push_back(dr.node(v));
      best = std::min(best, brute_kmedian(dr, clients, r.centers, r.k));
    }
    CHECK(s.value == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("policy value matches enumeration") {
  Rng rng({73, 0});
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = random_kmedian_instance(rng, 4, 4, 2, 1 + rng.below(2));
    inst.arbitrary_centers = trial % 2 == 1;
    const auto d = build_extended_metric(inst.points, inst.nodes);
    const auto S = mask_to_set(rng.below(16), 4);
    const auto pv = kmedian_policy_value(inst, d, S, EvalOptions{});
    CHECK(pv.exact);
    CHECK(pv.value == doctest::Approx(brute_policy(inst, d, S)).epsilon(1e-9));
  }
}

TEST_CASE("arbitrary centers may sit on unprobed nodes") {
  KMedianInstance inst;
  inst.points = line({0, 10});
  inst.nodes = {{DiscreteDist({{0.0, 0.5}, {1.0, 0.5}}), 1}};
  inst.k = 1;
  inst.centers = {0, 1};
  inst.budget = 1;
  const auto d = build_extended_metric(inst.points, inst.nodes);
  CHECK(kmedian_outlier_value(inst, d, {}) == doctest::Approx(5.0));
  inst.arbitrary_centers = true;
  CHECK(kmedian_outlier_value(inst, d, {}) == 0.0);
}

TEST_CASE("recombinant inequality on random instances") {
  Rng rng({79, 0});
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = random_kmedian_instance(rng, 4 + rng.below(2), 4 + rng.below(2), 2,
                                              1 + rng.below(2));
    const auto d = build_extended_metric(inst.points, inst.nodes);
    const auto A = mask_to_set(rng.below(std::uint64_t{1} << inst.size()), inst.size());
    std::vector<std::size_t> at;
    for (auto v : A) at.push_back(static_cast<std::size_t>(sample(inst.nodes[v].location, rng)));
    const auto r = recombinant_check_kmedian(inst, d, A, at);
    violations += !r.holds;
  }
  CHECK(violations == 0);
}

TEST_CASE("the recombinant inequality needs fixed centers") {
  // Two copies of a point mass at 0 and one node at 0 or 1; K = 2. Alone, the
  // unprobed nodes cost nothing (one center on the pair, one on the node) and
  // so does every scenario, but a probed node realized at 1 forces a cost.
  KMedianInstance inst;
  inst.points = line({0, 1});
  inst.nodes = {{DiscreteDist::point(1), 1},
                {DiscreteDist::point(0), 1},
                {DiscreteDist::point(0), 1},
                {DiscreteDist({{0.0, 0.5}, {1.0, 0.5}}), 1}};
  inst.k = 2;
  inst.centers = {0, 1};
  inst.budget = 1;
  inst.arbitrary_centers = true;
  const auto d = build_extended_metric(inst.points, inst.nodes);
  const std::vector<std::size_t> at{1};
  const auto r = recombinant_check_kmedian(inst, d, {0}, at);
  CHECK(r.q2 == 0.0);
  CHECK(r.q3 == 0.0);
  CHECK(r.q1 == doctest::Approx(0.5));
  CHECK_FALSE(r.holds);

  inst.arbitrary_centers = false;
  CHECK(recombinant_check_kmedian(inst, d, {0}, at).holds);
}

TEST_CASE("non-adaptive policy and the oracle adapter agree") {
  Rng rng({89, 0});
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = random_kmedian_instance(rng, 4, 3, 2, 1);
    const auto d = build_extended_metric(inst.points, inst.nodes);
    const auto p = kmedian_nonadaptive(inst, d, EvalOptions{});
    const auto model = kmedian_model(inst, d);
    CHECK(nonadaptive_value(model, p.selection.outliers) ==
          doctest::Approx(p.value.value).epsilon(1e-9));
    CHECK(p.value.probe_cost <= inst.budget + 1e-9);
  }
}

TEST_CASE("instance validation") {
  KMedianInstance inst;
  inst.points = line({0, 1});
  CHECK_THROWS_AS(inst.validate(), ValidationError);
  inst.nodes = {{DiscreteDist::point(0), 2}};
  inst.centers = {0};
  inst.budget = 1;
  CHECK_THROWS_AS(inst.validate(), ValidationError);
  inst.budget = 2;
  CHECK_NOTHROW(inst.validate());
  inst.centers = {5};
  CHECK_THROWS_AS(inst.validate(), ValidationError);
}

TEST_CASE("gap instance layout") {
  const auto g = gen_gap_instance({1, 4, 6});
  CHECK(g.cheap[0].size() == 7);
  CHECK(g.y[0].size() + g.z[0].size() == 8);
  CHECK(g.inst.size() == 15);
  CHECK(g.inst.k == 14);
  CHECK(g.expensive_cost() == 7.0);
  CHECK(g.inst.budget == 28.0);

  const auto& x1 = g.inst.nodes[g.cheap[0][0]].location;
  REQUIRE(x1.size() == 2);
  const auto& xy = g.inst.points.coordinates();
  const auto p0 = static_cast<Eigen::Index>(x1.value(0));
  const auto p1 = static_cast<Eigen::Index>(x1.value(1));
  CHECK(xy.row(p0) == Eigen::RowVector2d(0, 0));
  CHECK(xy.row(p1) == Eigen::RowVector2d(2, 0));
  CHECK(x1.prob(0) == 0.5);

  const auto& y = g.inst.nodes[g.y[0][0]].location;
  CHECK(y.prob(1) == doctest::Approx(std::log(4.0) / 4.0));
  CHECK(g.inst.nodes[g.y[0][0]].cost == 7.0);

  CHECK_THROWS_AS(gen_gap_instance({1, 4, 4}), ValidationError);
  CHECK_THROWS_AS(gen_gap_instance({4, 4, 12}), ValidationError);
}

TEST_CASE("gap copy value against exhaustive search") {
  const auto g = gen_gap_instance({1, 4, 6});
  const auto d = build_extended_metric(g.inst.points, g.inst.nodes);
  Rng rng({97, 0});
  for (int trial = 0; trial < 20; ++trial) {
    // A handful of realized points; k one or two below the distinct count.
    std::vector<std::size_t> clients;
    for (int i = 0; i < 5; ++i) clients.push_back(rng.below(6));
    auto uniq = clients;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    const std::size_t k = uniq.size() > 1 ? uniq.size() - 1 : 1;
    CHECK(gap_copy_value(d, clients, k) ==
          doctest::Approx(brute_kmedian(d, clients, uniq, k)).epsilon(1e-12));
  }
}

TEST_CASE("scripted policy: exact and simulated agree") {
  const auto g = gen_gap_instance({1, 4, 6});
  const auto d = build_extended_metric(g.inst.points, g.inst.nodes);
  const auto ex = scripted_adaptive_exact(g, d);
  EvalOptions opts;
  opts.mc_trials = 40000;
  const auto mc = scripted_adaptive_mc(g, d, opts);
  CHECK(std::abs(ex.value - mc.value) <= 4.0 * mc.half_width + 1e-12);
  CHECK(ex.expected_cost == doctest::Approx(mc.expected_cost).epsilon(0.02));
  CHECK(ex.expected_cost <= 4.0 * g.spec.copies * (g.spec.r + 1) + 1e-9);

  // Seven cheap locations are distinct iff at most one node sits at the origin.
  const double trigger = 8.0 / 128.0;
  CHECK(ex.expected_cost == doctest::Approx(7.0 + trigger * 8.0 * 7.0).epsilon(1e-12));
}

TEST_CASE("non-adaptive families") {
  const auto g = gen_gap_instance({1, 4, 6});
  const auto d = build_extended_metric(g.inst.points, g.inst.nodes);
  const auto fam = gap_nonadaptive_families(g, d, g.inst.budget);
  REQUIRE(fam.size() == 3);
  CHECK(fam[0].cost == 0.0);
  CHECK(fam[1].cost == 7.0);
  CHECK(fam[2].cost == 7.0 + 2.0 * 7.0);
  for (const auto& f : fam) CHECK(f.affordable);
  // Probing more never hurts in expectation.
  CHECK(fam[1].value <= fam[0].value + 1e-9);
  CHECK(fam[2].value <= fam[1].value + 1e-9);
}
