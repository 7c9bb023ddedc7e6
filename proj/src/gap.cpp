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

#include "stochprobe/gap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>

#include "stochprobe/errors.hpp"

namespace stochprobe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t point_of(const GapInstance& g, std::size_t node, std::size_t atom) {
  return static_cast<std::size_t>(g.inst.nodes[node].location.value(atom));
}

// Distinct locations among the realized cheap nodes of one copy.
std::size_t distinct_count(std::span<const std::size_t> pts) {
  std::vector<std::size_t> v(pts.begin(), pts.end());
  std::sort(v.begin(), v.end());
  return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

// Expected copy value when cheap nodes are probed (if `probe_cheap`) and the
// listed pairs are probed; everything else stays a node.
double nonadaptive_copy_value(const GapInstance& g, const ExtendedMetric& d, std::size_t m,
                              bool probe_cheap, const std::vector<std::size_t>& pairs) {
  const auto& cheap = g.cheap[m];
  const std::size_t rc = cheap.size();
  const std::size_t k = g.medians_per_copy();
  std::vector<std::size_t> clients;
  const std::uint64_t cheap_outcomes = probe_cheap ? std::uint64_t{1} << rc : 1;
  const std::uint64_t pair_outcomes = std::uint64_t{1} << (2 * pairs.size());
  double total = 0.0;
  for (std::uint64_t cm = 0; cm < cheap_outcomes; ++cm) {
    for (std::uint64_t pm = 0; pm < pair_outcomes; ++pm) {
      clients.clear();
      double prob = 1.0;
      for (std::size_t i = 0; i < rc; ++i) {
        if (!probe_cheap) {
          clients.push_back(d.node(cheap[i]));
          continue;
        }
        const std::size_t a = cm >> i & 1U;
        clients.push_back(point_of(g, cheap[i], a));
        prob *= g.inst.nodes[cheap[i]].location.prob(a);
      }
      std::vector<bool> probed(g.spec.pairs, false);
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        const std::size_t j = pairs[p];
        probed[j] = true;
        for (std::size_t side = 0; side < 2; ++side) {
          const std::size_t v = side == 0 ? g.y[m][j] : g.z[m][j];
          const std::size_t a = pm >> (2 * p + side) & 1U;
          clients.push_back(point_of(g, v, a));
          prob *= g.inst.nodes[v].location.prob(a);
        }
      }
      for (std::size_t j = 0; j < g.spec.pairs; ++j)
        if (!probed[j]) {
          clients.push_back(d.node(g.y[m][j]));
          clients.push_back(d.node(g.z[m][j]));
        }
      total += prob * gap_copy_value(d, clients, k);
    }
  }
  return total;
}

}  // namespace

void GapInstanceSpec::validate() const {
  if (copies < 1) throw ValidationError("copies", "must be >= 1");
  if (pairs < 2) throw ValidationError("pairs", "must be >= 2");
  const double mt = static_cast<double>(copies * pairs);
  if (!(static_cast<double>(r) > 2.0 * std::log2(mt)))
    throw ValidationError("r", "must exceed 2 log2(M t)");
  if (static_cast<double>(pairs) < 4.0 * std::sqrt(static_cast<double>(copies)))
    throw ValidationError("pairs", "must be at least 4 sqrt(M)");
  if (r + 1 > 20) throw ValidationError("r", "at most 19 (cheap outcomes are enumerated)");
}

double GapInstance::expensive_cost() const {
  return static_cast<double>((spec.r + 1) * spec.copies);
}

GapInstance gen_gap_instance(const GapInstanceSpec& spec) {
  spec.validate();
  GapInstance g;
  g.spec = spec;
  const std::size_t M = spec.copies, t = spec.pairs, r = spec.r;
  g.q = std::log(static_cast<double>(t)) / static_cast<double>(t);
  g.separation = static_cast<double>(M * M);
  // Pair members are 2 apart, so pairs sit at least 3 apart from each other
  // and from the cheap locations (L = 1 alone would let M = 1 pairs overlap).
  const double L = std::max(g.separation, 3.0);
  const double first_pair = static_cast<double>(r + 2) + L;
  const double span = first_pair + static_cast<double>(t) * L;
  g.copy_offset = span + std::pow(static_cast<double>(M), 3) * L;

  std::vector<Eigen::RowVector2d> pts;
  auto add = [&pts](double x, double y) {
    pts.emplace_back(x, y);
    return static_cast<double>(pts.size() - 1);
  };
  const double q = g.q;
  g.cheap.resize(M);
  g.y.resize(M);
  g.z.resize(M);
  for (std::size_t m = 0; m < M; ++m) {
    const double x0 = static_cast<double>(m) * g.copy_offset;
    const double origin = add(x0, 0.0);
    for (std::size_t i = 1; i <= r + 1; ++i) {
      const double at = add(x0 + static_cast<double>(i + 1), 0.0);
      g.cheap[m].push_back(g.inst.nodes.size());
      g.inst.nodes.push_back({DiscreteDist({{origin, 0.5}, {at, 0.5}}), 1.0});
    }
    for (std::size_t j = 1; j <= t; ++j) {
      const double x = x0 + first_pair + static_cast<double>(j - 1) * L;
      const double up = add(x, 1.0), mid = add(x, 0.0), down = add(x, -1.0);
      const double c = static_cast<double>((r + 1) * M);
      g.y[m].push_back(g.inst.nodes.size());
      g.inst.nodes.push_back({DiscreteDist({{up, 1.0 - q}, {mid, q}}), c});
      g.z[m].push_back(g.inst.nodes.size());
      g.inst.nodes.push_back({DiscreteDist({{down, 1.0 - q}, {mid, q}}), c});
    }
  }
  Eigen::MatrixX2d xy(static_cast<Eigen::Index>(pts.size()), 2);
  for (std::size_t p = 0; p < pts.size(); ++p) xy.row(static_cast<Eigen::Index>(p)) = pts[p];
  g.inst.points = PointSet::from_coordinates(std::move(xy), Norm::kL2);
  g.inst.k = (2 * t + r) * M;
  g.inst.centers = full_set(g.inst.points.size());
  g.inst.arbitrary_centers = true;
  g.inst.budget = 4.0 * static_cast<double>(M * (r + 1));
  return g;
}

double gap_copy_value(const ExtendedMetric& d, std::span<const std::size_t> clients,
                      std::size_t k) {
  std::map<std::size_t, std::size_t> mult;
  for (auto c : clients) ++mult[c];
  if (mult.size() <= k) return 0.0;
  if (mult.size() == k + 1) {
    // One group must join another; merging the smaller group into the other
    // is optimal by the triangle inequality.
    double best = kInf;
    for (auto a = mult.begin(); a != mult.end(); ++a)
      for (auto b = std::next(a); b != mult.end(); ++b)
        best = std::min(best, static_cast<double>(std::min(a->second, b->second)) *
                                  d(a->first, b->first));
    return best;
  }
  IndexSet cand = full_set(d.num_points);
  for (const auto& [c, n] : mult)
    if (c >= d.num_points) cand.push_back(c);
  return kmedian_local_search(d, clients, cand, k).value;
}

ScriptedResult scripted_adaptive_exact(const GapInstance& g, const ExtendedMetric& d) {
  ScriptedResult res;
  const std::size_t M = g.spec.copies, rc = g.spec.r + 1, t = g.spec.pairs;
  double p_quiet = 1.0;  // no copy triggers the expensive probes
  std::vector<std::size_t> cheap_pts(rc);
  for (std::size_t m = 0; m < M; ++m) {
    // Per-pair distance distribution once both members are observed.
    std::vector<std::vector<std::pair<double, double>>> gaps(t);
    double cross_floor = kInf, gap_max = 0.0;
    for (std::size_t j = 0; j < t; ++j)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) {
          const double v = d(point_of(g, g.y[m][j], a), point_of(g, g.z[m][j], b));
          gaps[j].emplace_back(v, g.inst.nodes[g.y[m][j]].location.prob(a) *
                                      g.inst.nodes[g.z[m][j]].location.prob(b));
          gap_max = std::max(gap_max, v);
        }
    // Any distance across pairs or between a pair and a cheap point.
    std::vector<std::size_t> pair_pts, cheap_support;
    for (std::size_t j = 0; j < t; ++j)
      for (std::size_t a = 0; a < 2; ++a) {
        pair_pts.push_back(point_of(g, g.y[m][j], a));
        pair_pts.push_back(point_of(g, g.z[m][j], a));
      }
    for (auto v : g.cheap[m])
      for (std::size_t a = 0; a < 2; ++a) cheap_support.push_back(point_of(g, v, a));
    for (std::size_t i = 0; i < pair_pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pair_pts.size(); ++j)
        if (i / 4 != j / 4) cross_floor = std::min(cross_floor, d(pair_pts[i], pair_pts[j]));
      for (auto c : cheap_support) cross_floor = std::min(cross_floor, d(pair_pts[i], c));
    }
    if (cross_floor <= gap_max)
      throw ConsistencyError("gap layout: pairs are not separated from each other");

    // Breakpoints of P(min_j G_j > s).
    std::vector<double> cuts{0.0};
    for (const auto& gj : gaps)
      for (const auto& [v, p] : gj)
        if (v > 0.0) cuts.push_back(v);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto survive = [&](double s) {
      double prod = 1.0;
      for (const auto& gj : gaps) {
        double tail = 0.0;
        for (const auto& [v, p] : gj)
          if (v > s) tail += p;
        prod *= tail;
      }
      return prod;
    };

    double p_trigger = 0.0, copy_value = 0.0;
    for (std::uint64_t cm = 0; cm < (std::uint64_t{1} << rc); ++cm) {
      double prob = 1.0;
      for (std::size_t i = 0; i < rc; ++i) {
        const std::size_t a = cm >> i & 1U;
        cheap_pts[i] = point_of(g, g.cheap[m][i], a);
        prob *= g.inst.nodes[g.cheap[m][i]].location.prob(a);
      }
      if (distinct_count(cheap_pts) < rc) continue;  // value 0, nothing more to probe
      p_trigger += prob;
      // With every pair observed, the copy pays min(cheap gap, min_j G_j).
      const double gc = gap_copy_value(d, cheap_pts, rc - 1);
      double e = 0.0;
      for (std::size_t c = 0; c < cuts.size(); ++c) {
        const double lo = cuts[c];
        const double hi = std::min(gc, c + 1 < cuts.size() ? cuts[c + 1] : kInf);
        if (hi > lo) e += (hi - lo) * survive(lo);
      }
      copy_value += prob * e;
    }
    res.value += copy_value;
    p_quiet *= 1.0 - p_trigger;
  }
  const double cheap_total = static_cast<double>(M * rc) * g.cheap_cost();
  const double expensive_total = static_cast<double>(2 * M * t) * g.expensive_cost();
  res.expected_cost = cheap_total + (1.0 - p_quiet) * expensive_total;
  res.exact = true;
  return res;
}

ScriptedResult scripted_adaptive_mc(const GapInstance& g, const ExtendedMetric& d,
                                    const EvalOptions& opts) {
  const std::size_t M = g.spec.copies, t = g.spec.pairs;
  const std::size_t k = g.medians_per_copy();
  const double cheap_total = static_cast<double>(M * (g.spec.r + 1)) * g.cheap_cost();
  const double expensive_total = static_cast<double>(2 * M * t) * g.expensive_cost();

  // Each trial returns its value; the cost of the same trial is recovered by
  // replaying the identical stream.
  auto run = [&](Rng& rng, bool want_cost) {
    std::vector<std::vector<std::size_t>> cheap_pts(M);
    bool trigger = false;
    for (std::size_t m = 0; m < M; ++m) {
      for (auto v : g.cheap[m])
        cheap_pts[m].push_back(static_cast<std::size_t>(sample(g.inst.nodes[v].location, rng)));
      trigger = trigger || distinct_count(cheap_pts[m]) == cheap_pts[m].size();
    }
    if (want_cost) return cheap_total + (trigger ? expensive_total : 0.0);
    double value = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
      std::vector<std::size_t> clients = cheap_pts[m];
      for (std::size_t j = 0; j < t; ++j)
        for (auto v : {g.y[m][j], g.z[m][j]})
          clients.push_back(trigger ? static_cast<std::size_t>(sample(g.inst.nodes[v].location, rng))
                                    : d.node(v));
      value += gap_copy_value(d, clients, k);
    }
    return value;
  };
  const SeedSpec seed{opts.seed, opts.stream};
  const auto v = monte_carlo(opts.mc_trials, seed, opts.threads, [&](Rng& r) { return run(r, false); });
  const auto c = monte_carlo(opts.mc_trials, seed, opts.threads, [&](Rng& r) { return run(r, true); });
  ScriptedResult res;
  res.value = v.mean;
  res.half_width = v.half_width;
  res.expected_cost = c.mean;
  res.exact = false;
  return res;
}

std::vector<GapFamily> gap_nonadaptive_families(const GapInstance& g, const ExtendedMetric& d,
                                                double budget) {
  const std::size_t M = g.spec.copies;
  const double cheap_total = static_cast<double>(M * (g.spec.r + 1)) * g.cheap_cost();
  struct Plan {
    const char* name;
    bool cheap;
    std::vector<std::size_t> pairs;
  };
  const std::vector<Plan> plans{
      {"no-probe", false, {}},
      {"cheap-only", true, {}},
      {"cheap+one-pair-per-copy", true, {0}},
  };
  std::vector<GapFamily> out;
  for (const auto& p : plans) {
    GapFamily f;
    f.name = p.name;
    f.cost = (p.cheap ? cheap_total : 0.0) +
             static_cast<double>(2 * M * p.pairs.size()) * g.expensive_cost();
    for (std::size_t m = 0; m < M; ++m) f.value += nonadaptive_copy_value(g, d, m, p.cheap, p.pairs);
    f.affordable = within_budget(f.cost, budget);
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace stochprobe
