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

#include <cmath>
#include <vector>

#include "stochprobe/dist.hpp"
#include "stochprobe/errors.hpp"

using namespace stochprobe;

namespace {

DiscreteDist random_dist(Rng& rng, std::size_t max_support) {
  const std::size_t s = 1 + rng.below(max_support);
  std::vector<DiscreteDist::Atom> atoms;
  double total = 0.0;
  for (std::size_t k = 0; k < s; ++k) {
    const double p = 0.1 + rng.uniform();
    atoms.push_back({static_cast<double>(k) * 1.5 + std::floor(rng.uniform() * 4.0) * 0.25, p});
    total += p;
  }
  for (auto& a : atoms) a.prob /= total;
  return DiscreteDist::normalized(atoms, 1e-9);
}

}  // namespace

TEST_CASE("expectation of small distributions") {
  CHECK(expectation(DiscreteDist::point(5.0)) == 5.0);
  CHECK(expectation(DiscreteDist({{0.0, 0.95}, {1.0, 0.05}})) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(expectation(DiscreteDist({{2.0, 0.5}, {4.0, 0.5}})) == 3.0);
}

TEST_CASE("pairwise_expect_min worked cases") {
  CHECK(pairwise_expect_min(DiscreteDist::point(1), 1, DiscreteDist::point(2), 1) == 1.0);
  const DiscreteDist two({{0.0, 0.5}, {2.0, 0.5}});
  CHECK(pairwise_expect_min(two, 1, DiscreteDist::point(1), 1) == doctest::Approx(0.5));
  CHECK(pairwise_expect_min(two, 1, two, 1) == doctest::Approx(0.5));
}

TEST_CASE("pairwise_expect_min matches joint enumeration") {
  Rng rng({7, 0});
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_dist(rng, 10);
    const auto b = random_dist(rng, 10);
    const double wa = rng.uniform() * 3.0, wb = rng.uniform() * 3.0;
    double brute = 0.0;
    const std::vector<DiscreteDist> ds{a, b};
    for (const auto& o : enumerate_joint(ds)) brute += o.prob * std::min(wb * o.values[0], wa * o.values[1]);
    CHECK(pairwise_expect_min(a, wa, b, wb) == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("expectation lies within the support range") {
  Rng rng({11, 0});
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = random_dist(rng, 6);
    const double mu = expectation(d);
    CHECK(mu >= d.min_value() - 1e-12);
    CHECK(mu <= d.max_value() + 1e-12);
  }
}

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(DiscreteDist({}), ValidationError);
  CHECK_THROWS_AS(DiscreteDist({{-1.0, 1.0}}), ValidationError);
  CHECK_THROWS_AS(DiscreteDist({{1.0, 0.5}, {1.0, 0.5}}), ValidationError);
  CHECK_THROWS_AS(DiscreteDist({{1.0, 0.5}, {2.0, 0.4}}), ValidationError);
  CHECK_THROWS_AS(DiscreteDist({{1.0, 0.0}, {2.0, 1.0}}), ValidationError);
  const auto d = DiscreteDist::normalized({{1.0, 0.5}, {0.0, 0.499999999999}}, 1e-9);
  CHECK(d.value(0) == 0.0);
  CHECK(d.prob(0) + d.prob(1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("empirical distribution from samples") {
  const std::vector<double> xs{3, 1, 3, 3, 0};
  const auto d = DiscreteDist::from_samples(xs);
  REQUIRE(d.size() == 3);
  CHECK(d.value(2) == 3.0);
  CHECK(d.prob(2) == doctest::Approx(0.6));
}

TEST_CASE("sampling is deterministic per stream") {
  const DiscreteDist pm = DiscreteDist::point(3.0);
  CHECK(sample(pm, SeedSpec{123, 4}) == 3.0);
  const DiscreteDist two({{0.0, 0.3}, {1.0, 0.7}});
  Rng a({42, 9}), b({42, 9});
  for (int k = 0; k < 1000; ++k) CHECK(sample(two, a) == sample(two, b));
  CHECK(sample(two, SeedSpec{5, 5}) == sample(two, SeedSpec{5, 5}));
}

TEST_CASE("empirical frequency within 3 sigma") {
  const double p = 0.3;
  const DiscreteDist two({{0.0, 1.0 - p}, {1.0, p}});
  Rng rng({2026, 1});
  const int n = 100000;
  int ones = 0;
  for (int k = 0; k < n; ++k) ones += sample(two, rng) == 1.0;
  const double sigma = std::sqrt(n * p * (1 - p));
  CHECK(std::abs(ones - n * p) <= 3.0 * sigma);
}

TEST_CASE("joint enumeration") {
  const DiscreteDist h({{0.0, 0.5}, {1.0, 0.5}});
  std::vector<DiscreteDist> one{h};
  auto o1 = enumerate_joint(one);
  REQUIRE(o1.size() == 2);
  CHECK(o1[0].prob == 0.5);

  std::vector<DiscreteDist> two{h, h};
  auto o2 = enumerate_joint(two);
  REQUIRE(o2.size() == 4);
  for (const auto& o : o2) CHECK(o.prob == 0.25);

  std::vector<DiscreteDist> three{h, DiscreteDist({{0, 0.2}, {1, 0.3}, {2, 0.5}}), DiscreteDist::point(4)};
  auto o3 = enumerate_joint(three);
  CHECK(o3.size() == 6);
  double total = 0.0;
  for (const auto& o : o3) total += o.prob;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

  std::vector<DiscreteDist> none;
  CHECK(enumerate_joint(none).size() == 1);

  std::vector<DiscreteDist> big(5, DiscreteDist({{0, 0.5}, {1, 0.5}}));
  CHECK_THROWS_AS(enumerate_joint(big, 16), EnumerationTooLarge);
}

TEST_CASE("joint probabilities sum to one") {
  Rng rng({99, 0});
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<DiscreteDist> ds;
    const std::size_t n = 1 + rng.below(5);
    for (std::size_t i = 0; i < n; ++i) ds.push_back(random_dist(rng, 4));
    double total = 0.0;
    JointEnumerator e(ds);
    std::size_t count = 0;
    while (e.next()) {
      total += e.prob();
      ++count;
    }
    CHECK(count == static_cast<std::size_t>(joint_size(std::span<const DiscreteDist>(ds))));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}
