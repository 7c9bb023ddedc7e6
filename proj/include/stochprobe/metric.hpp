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

// Expected-distance metric over concrete points and distributional nodes.
//
// Indices into the extended metric put the points first: element p < P is
// point p, element P + v is node v.

#ifndef STOCHPROBE_METRIC_HPP
#define STOCHPROBE_METRIC_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "stochprobe/common.hpp"
#include "stochprobe/dist.hpp"

namespace stochprobe {

enum class Norm { kL1, kL2 };

inline constexpr double kMetricTolerance = 1e-9;

/// Concrete points with a metric, either an explicit matrix or planar
/// coordinates under L1 or L2.
class PointSet {
 public:
  PointSet() = default;

  /// Throws ValidationError("metric.matrix", ...) unless square, symmetric,
  /// zero on the diagonal, nonnegative and triangle-consistent.
  static PointSet from_matrix(Eigen::MatrixXd l);
  static PointSet from_coordinates(Eigen::MatrixX2d xy, Norm norm);

  std::size_t size() const { return n_; }
  double distance(std::size_t p, std::size_t q) const;

  bool has_coordinates() const { return coords_; }
  const Eigen::MatrixX2d& coordinates() const { return xy_; }
  Norm norm() const { return norm_; }
  const Eigen::MatrixXd& matrix() const { return l_; }

 private:
  std::size_t n_ = 0;
  bool coords_ = false;
  Eigen::MatrixX2d xy_;
  Norm norm_ = Norm::kL2;
  Eigen::MatrixXd l_;
};

/// A node whose location is a distribution over point indices.
struct Node {
  DiscreteDist location;
  double cost = 1.0;
};

using NodeSet = std::vector<Node>;

/// Throws ValidationError unless every support value is an integral point index.
void validate_nodes(const PointSet& ps, const NodeSet& ns);

struct ExtendedMetric {
  Eigen::MatrixXd d;
  std::size_t num_points = 0;
  std::size_t num_nodes = 0;

  std::size_t size() const { return num_points + num_nodes; }
  std::size_t node(std::size_t v) const { return num_points + v; }
  double operator()(std::size_t a, std::size_t b) const { return d(a, b); }
};

/// E[l(X_a, X_b)] for elements of P and V; zero when a == b.
double expected_distance(std::size_t a, std::size_t b, const PointSet& ps, const NodeSet& ns);

/// Largest violation d(i,k) - d(i,j) - d(j,k) over all triples (0 if none).
double max_triangle_violation(const Eigen::MatrixXd& d);

/// Full matrix; throws ConsistencyError when a triangle fails by more than
/// kMetricTolerance.
ExtendedMetric build_extended_metric(const PointSet& ps, const NodeSet& ns, bool check = true);

/// Expected value of `fn` over the joint locations of the nodes in `probed`.
/// `fn` receives one point index per probed node. Exact when the number of
/// joint outcomes is <= opts.enum_cap, Monte Carlo otherwise.
PolicyValue expect_over_locations(const NodeSet& ns, const IndexSet& probed,
                                  const EvalOptions& opts,
                                  const std::function<double(std::span<const std::size_t>)>& fn);

}  // namespace stochprobe

#endif  // STOCHPROBE_METRIC_HPP
