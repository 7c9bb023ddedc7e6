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

#include <vector>

#include "stochprobe/errors.hpp"
#include "stochprobe/generators.hpp"
#include "stochprobe/metric.hpp"

using namespace stochprobe;

namespace {

PointSet line(std::vector<double> xs) {
  Eigen::MatrixX2d xy(static_cast<Eigen::Index>(xs.size()), 2);
  for (std::size_t i = 0; i < xs.size(); ++i) xy.row(static_cast<Eigen::Index>(i)) << xs[i], 0.0;
  return PointSet::from_coordinates(xy, Norm::kL1);
}

DiscreteDist uniform(std::vector<double> pts) {
  std::vector<DiscreteDist::Atom> a;
  for (double p : pts) a.push_back({p, 1.0 / static_cast<double>(pts.size())});
  return DiscreteDist::normalized(a, 1e-12);
}

}  // namespace

TEST_CASE("point distances") {
  Eigen::MatrixX2d xy(2, 2);
  xy << 0, 0, 3, 4;
  CHECK(PointSet::from_coordinates(xy, Norm::kL2).distance(0, 1) == doctest::Approx(5.0));
  CHECK(PointSet::from_coordinates(xy, Norm::kL1).distance(0, 1) == doctest::Approx(7.0));
  Eigen::MatrixXd m(3, 3);
  m << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  CHECK(PointSet::from_matrix(m).distance(0, 2) == 2.0);
}

TEST_CASE("matrix validation") {
  Eigen::MatrixXd asym(2, 2);
  asym << 0, 1, 2, 0;
  CHECK_THROWS_AS(PointSet::from_matrix(asym), ValidationError);
  Eigen::MatrixXd diag(2, 2);
  diag << 1, 1, 1, 0;
  CHECK_THROWS_AS(PointSet::from_matrix(diag), ValidationError);
  Eigen::MatrixXd tri(3, 3);
  tri << 0, 1, 5, 1, 0, 1, 5, 1, 0;
  CHECK_THROWS_AS(PointSet::from_matrix(tri), ValidationError);
}

TEST_CASE("expected distances") {
  const auto ps = line({0, 1, 2});
  NodeSet ns{{DiscreteDist::point(0), 1}, {DiscreteDist::point(2), 1}};
  CHECK(expected_distance(3, 4, ps, ns) == 2.0);
  CHECK(expected_distance(3, 3, ps, ns) == 0.0);

  NodeSet two{{uniform({0, 2}), 1}, {uniform({0, 2}), 1}};
  CHECK(expected_distance(3, 4, ps, two) == doctest::Approx(1.0));
  CHECK(expected_distance(0, 3, ps, two) == doctest::Approx(1.0));
  CHECK(expected_distance(3, 0, ps, two) == doctest::Approx(1.0));

  const auto ps2 = line({0, 4});
  NodeSet half{{uniform({0, 1}), 1}};
  CHECK(expected_distance(0, 2, ps2, half) == doctest::Approx(2.0));
}

TEST_CASE("extended metric shape") {
  const auto ps = line({0, 3});
  NodeSet ns{{uniform({0, 1}), 1}};
  const auto m = build_extended_metric(ps, ns);
  REQUIRE(m.d.rows() == 3);
  CHECK((m.d - m.d.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(m.d.diagonal().isZero());
  CHECK(m(0, 1) == 3.0);
  CHECK(m(m.node(0), 0) == doctest::Approx(1.5));

  // Point masses: the node block is a relabeling of the point block.
  const auto ps3 = line({0, 1, 5});
  NodeSet pm{{DiscreteDist::point(2), 1}, {DiscreteDist::point(0), 1}};
  const auto m3 = build_extended_metric(ps3, pm);
  CHECK(m3(m3.node(0), m3.node(1)) == ps3.distance(2, 0));
}

TEST_CASE("dangling locations are rejected") {
  const auto ps = line({0, 1});
  NodeSet bad{{DiscreteDist::point(2), 1}};
  CHECK_THROWS_AS(build_extended_metric(ps, bad), ValidationError);
  NodeSet frac{{DiscreteDist::point(0.5), 1}};
  CHECK_THROWS_AS(build_extended_metric(ps, frac), ValidationError);
}

TEST_CASE("triangle inequality on random extended metrics") {
  Rng rng({83, 0});
  for (int trial = 0; trial < 100; ++trial) {
    const auto ps = random_point_set(rng, 1 + rng.below(8), trial % 2 ? Norm::kL1 : Norm::kL2);
    const auto ns = random_node_set(rng, ps, 1 + rng.below(6), 3);
    const auto m = build_extended_metric(ps, ns, false);
    CHECK(max_triangle_violation(m.d) <= 1e-9);
    for (std::size_t p = 0; p < ps.size(); ++p)
      for (std::size_t q = 0; q < ps.size(); ++q) CHECK(m(p, q) == ps.distance(p, q));
  }
}

TEST_CASE("expectation over node locations") {
  const auto ps = line({0, 2});
  NodeSet ns{{uniform({0, 1}), 1}, {uniform({0, 1}), 2}};
  EvalOptions opts;
  const auto pv = expect_over_locations(ns, {0, 1}, opts, [&](std::span<const std::size_t> at) {
    return ps.distance(at[0], at[1]);
  });
  CHECK(pv.exact);
  CHECK(pv.value == doctest::Approx(1.0));
  CHECK(pv.probe_cost == 3.0);

  opts.enum_cap = 1;
  opts.mc_trials = 50000;
  const auto mc = expect_over_locations(ns, {0, 1}, opts, [&](std::span<const std::size_t> at) {
    return ps.distance(at[0], at[1]);
  });
  CHECK_FALSE(mc.exact);
  CHECK(std::abs(mc.value - 1.0) <= 4.0 * mc.half_width);
}
