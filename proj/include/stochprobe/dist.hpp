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

#ifndef STOCHPROBE_DIST_HPP
#define STOCHPROBE_DIST_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "stochprobe/random.hpp"

namespace stochprobe {

inline constexpr double kProbTolerance = 1e-12;
inline constexpr double kDefaultEnumCap = 1e7;

/// Finite-support distribution of a nonnegative quantity.
///
/// Atoms are kept sorted by value. Values are distinct and nonnegative,
/// probabilities lie in (0, 1] and sum to one within kProbTolerance.
/// Immutable after construction.
class DiscreteDist {
 public:
  struct Atom {
    double value;
    double prob;
    bool operator==(const Atom&) const = default;
  };

  /// Validates; throws ValidationError("dist", ...) on any violation.
  explicit DiscreteDist(std::vector<Atom> atoms);

  static DiscreteDist point(double value);

  /// Accepts probability sums within `tolerance` of one and rescales them.
  static DiscreteDist normalized(std::vector<Atom> atoms, double tolerance);

  /// Empirical distribution of a sample list (duplicate samples merged).
  static DiscreteDist from_samples(std::span<const double> samples);

  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double value(std::size_t k) const { return atoms_[k].value; }
  double prob(std::size_t k) const { return atoms_[k].prob; }
  double min_value() const { return atoms_.front().value; }
  double max_value() const { return atoms_.back().value; }
  bool is_point_mass() const { return atoms_.size() == 1; }

  bool operator==(const DiscreteDist&) const = default;

 private:
  std::vector<Atom> atoms_;
};

/// Sum of value * prob.
double expectation(const DiscreteDist& d);

/// E[min(wB * XA, wA * XB)] for independent XA ~ dA, XB ~ dB, by enumerating
/// support pairs.
double pairwise_expect_min(const DiscreteDist& dA, double wA,
                           const DiscreteDist& dB, double wB);

std::size_t sample_index(const DiscreteDist& d, Rng& rng);
double sample(const DiscreteDist& d, Rng& rng);
/// First draw of the stream named by `s`.
double sample(const DiscreteDist& d, const SeedSpec& s);

/// Number of joint outcomes of independent variables (as a double so that
/// overflow saturates instead of wrapping).
double joint_size(std::span<const DiscreteDist* const> dists);
double joint_size(std::span<const DiscreteDist> dists);

/// Walks every joint realization of a list of independent distributions in
/// odometer order (last variable fastest).
///
///   JointEnumerator e(dists);
///   while (e.next()) use(e.indices(), e.values(), e.prob());
///
/// An empty list yields exactly one outcome with probability one.
class JointEnumerator {
 public:
  explicit JointEnumerator(std::vector<const DiscreteDist*> dists,
                           double cap = kDefaultEnumCap);
  explicit JointEnumerator(std::span<const DiscreteDist> dists,
                           double cap = kDefaultEnumCap);

  bool next();

  const std::vector<std::size_t>& indices() const { return idx_; }
  const std::vector<double>& values() const { return values_; }
  double prob() const { return prob_; }
  double total() const { return total_; }

 private:
  void refresh();

  std::vector<const DiscreteDist*> dists_;
  std::vector<std::size_t> idx_;
  std::vector<double> values_;
  double prob_ = 0.0;
  double total_ = 0.0;
  bool started_ = false;
  bool done_ = false;
};

/// Materialized joint outcomes; prefer JointEnumerator for large products.
struct JointOutcome {
  std::vector<double> values;
  double prob;
};
std::vector<JointOutcome> enumerate_joint(std::span<const DiscreteDist> dists,
                                          double cap = kDefaultEnumCap);

}  // namespace stochprobe

#endif  // STOCHPROBE_DIST_HPP
