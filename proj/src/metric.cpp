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

#include "stochprobe/metric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stochprobe/errors.hpp"

namespace stochprobe {

PointSet PointSet::from_matrix(Eigen::MatrixXd l) {
  if (l.rows() != l.cols() || l.rows() == 0)
    throw ValidationError("metric.matrix", "must be a non-empty square matrix");
  if (!l.allFinite()) throw ValidationError("metric.matrix", "entries must be finite");
  if ((l.array() < 0.0).any()) throw ValidationError("metric.matrix", "entries must be >= 0");
  if (l.diagonal().cwiseAbs().maxCoeff() > 0.0)
    throw ValidationError("metric.matrix", "diagonal must be zero");
  if ((l - l.transpose()).cwiseAbs().maxCoeff() > kMetricTolerance)
    throw ValidationError("metric.matrix", "matrix is not symmetric");
  if (max_triangle_violation(l) > kMetricTolerance)
    throw ValidationError("metric.matrix", "triangle inequality fails");
  PointSet ps;
  ps.n_ = static_cast<std::size_t>(l.rows());
  ps.l_ = std::move(l);
  return ps;
}

PointSet PointSet::from_coordinates(Eigen::MatrixX2d xy, Norm norm) {
  if (xy.rows() == 0) throw ValidationError("metric.points", "at least one point is required");
  if (!xy.allFinite()) throw ValidationError("metric.points", "coordinates must be finite");
  PointSet ps;
  ps.n_ = static_cast<std::size_t>(xy.rows());
  ps.coords_ = true;
  ps.xy_ = std::move(xy);
  ps.norm_ = norm;
  return ps;
}

double PointSet::distance(std::size_t p, std::size_t q) const {
  if (!coords_) return l_(p, q);
  const Eigen::RowVector2d diff = xy_.row(p) - xy_.row(q);
  return norm_ == Norm::kL1 ? diff.cwiseAbs().sum() : diff.norm();
}

void validate_nodes(const PointSet& ps, const NodeSet& ns) {
  for (std::size_t v = 0; v < ns.size(); ++v) {
    const std::string f = "items[" + std::to_string(v) + "]";
    if (!(ns[v].cost >= 0.0)) throw ValidationError(f + ".cost", "must be >= 0");
    for (const auto& a : ns[v].location.atoms())
      if (a.value != std::floor(a.value) || a.value >= static_cast<double>(ps.size()))
        throw ValidationError(f + ".dist", "location " + std::to_string(a.value) +
                                               " is not a point index below " +
                                               std::to_string(ps.size()));
  }
}

namespace {

std::size_t as_point(double v) { return static_cast<std::size_t>(v); }

}  // namespace

double expected_distance(std::size_t a, std::size_t b, const PointSet& ps, const NodeSet& ns) {
  if (a == b) return 0.0;
  const std::size_t P = ps.size();
  if (a < P && b < P) return ps.distance(a, b);
  if (a >= P && b < P) std::swap(a, b);
  if (a < P) {
    double s = 0.0;
    for (const auto& x : ns[b - P].location.atoms()) s += x.prob * ps.distance(a, as_point(x.value));
    return s;
  }
  double s = 0.0;
  for (const auto& x : ns[a - P].location.atoms())
    for (const auto& y : ns[b - P].location.atoms())
      s += x.prob * y.prob * ps.distance(as_point(x.value), as_point(y.value));
  return s;
}

double max_triangle_violation(const Eigen::MatrixXd& d) {
  const Eigen::Index n = d.rows();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double dij = d(i, j);
      for (Eigen::Index k = 0; k < n; ++k) worst = std::max(worst, d(i, k) - dij - d(j, k));
    }
  return worst;
}

ExtendedMetric build_extended_metric(const PointSet& ps, const NodeSet& ns, bool check) {
  validate_nodes(ps, ns);
  ExtendedMetric m;
  m.num_points = ps.size();
  m.num_nodes = ns.size();
  const auto n = static_cast<Eigen::Index>(m.size());
  m.d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      m.d(i, j) = m.d(j, i) = expected_distance(static_cast<std::size_t>(i),
                                                static_cast<std::size_t>(j), ps, ns);
  if (check) {
    const double v = max_triangle_violation(m.d);
    if (v > kMetricTolerance)
      throw ConsistencyError("extended metric violates the triangle inequality by " +
                             std::to_string(v));
  }
  return m;
}

PolicyValue expect_over_locations(const NodeSet& ns, const IndexSet& probed,
                                  const EvalOptions& opts,
                                  const std::function<double(std::span<const std::size_t>)>& fn) {
  PolicyValue pv;
  pv.probe_set = probed;
  std::vector<const DiscreteDist*> ds;
  for (auto v : probed) {
    ds.push_back(&ns[v].location);
    pv.probe_cost += ns[v].cost;
  }

  if (joint_size(ds) <= opts.enum_cap) {
    JointEnumerator e(ds, opts.enum_cap);
    std::vector<std::size_t> at(ds.size());
    while (e.next()) {
      for (std::size_t k = 0; k < ds.size(); ++k) at[k] = as_point(e.values()[k]);
      pv.value += e.prob() * fn(at);
    }
    pv.exact = true;
    return pv;
  }
  const auto est = monte_carlo(opts.mc_trials, SeedSpec{opts.seed, opts.stream}, opts.threads,
                               [&](Rng& rng) {
                                 std::vector<std::size_t> at(ds.size());
                                 for (std::size_t k = 0; k < ds.size(); ++k)
                                   at[k] = as_point(sample(*ds[k], rng));
                                 return fn(at);
                               });
  pv.value = est.mean;
  pv.half_width = est.half_width;
  pv.exact = false;
  return pv;
}

}  // namespace stochprobe
