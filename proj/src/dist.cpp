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

#include "stochprobe/dist.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "stochprobe/errors.hpp"

namespace stochprobe {

namespace {

void sort_and_check(std::vector<DiscreteDist::Atom>& atoms) {
  if (atoms.empty()) throw ValidationError("dist", "empty support");
  for (const auto& a : atoms) {
    if (!std::isfinite(a.value) || a.value < 0.0)
      throw ValidationError("dist", "support value " + std::to_string(a.value) +
                                        " is negative or not finite");
    if (!(a.prob > 0.0) || a.prob > 1.0 + kProbTolerance)
      throw ValidationError(
          "dist", "probability " + std::to_string(a.prob) + " outside (0, 1]");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.value < b.value; });
  for (std::size_t k = 1; k < atoms.size(); ++k)
    if (atoms[k].value == atoms[k - 1].value)
      throw ValidationError("dist", "duplicate support value " +
                                        std::to_string(atoms[k].value));
}

double prob_sum(const std::vector<DiscreteDist::Atom>& atoms) {
  double s = 0.0;
  for (const auto& a : atoms) s += a.prob;
  return s;
}

}  // namespace

DiscreteDist::DiscreteDist(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  sort_and_check(atoms_);
  const double s = prob_sum(atoms_);
  if (std::abs(s - 1.0) > kProbTolerance)
    throw ValidationError("dist",
                          "probabilities sum to " + std::to_string(s) + ", not 1");
}

DiscreteDist DiscreteDist::point(double value) {
  return DiscreteDist({{value, 1.0}});
}

DiscreteDist DiscreteDist::normalized(std::vector<Atom> atoms, double tolerance) {
  sort_and_check(atoms);
  const double s = prob_sum(atoms);
  if (std::abs(s - 1.0) > tolerance)
    throw ValidationError("dist", "probabilities sum to " + std::to_string(s) +
                                      ", outside tolerance");
  for (auto& a : atoms) a.prob /= s;
  return DiscreteDist(std::move(atoms));
}

DiscreteDist DiscreteDist::from_samples(std::span<const double> samples) {
  if (samples.empty()) throw ValidationError("dist", "no samples");
  std::map<double, std::size_t> counts;
  for (double x : samples) ++counts[x];
  std::vector<Atom> atoms;
  const auto n = static_cast<double>(samples.size());
  for (const auto& [v, c] : counts) atoms.push_back({v, static_cast<double>(c) / n});
  return normalized(std::move(atoms), 1e-9);
}

double expectation(const DiscreteDist& d) {
  double s = 0.0;
  for (const auto& a : d.atoms()) s += a.value * a.prob;
  return s;
}

double pairwise_expect_min(const DiscreteDist& dA, double wA,
                           const DiscreteDist& dB, double wB) {
  double s = 0.0;
  for (const auto& a : dA.atoms())
    for (const auto& b : dB.atoms())
      s += a.prob * b.prob * std::min(wB * a.value, wA * b.value);
  return s;
}

std::size_t sample_index(const DiscreteDist& d, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < d.size(); ++k) {
    acc += d.prob(k);
    if (u < acc) return k;
  }
  return d.size() - 1;
}

double sample(const DiscreteDist& d, Rng& rng) { return d.value(sample_index(d, rng)); }

double sample(const DiscreteDist& d, const SeedSpec& s) {
  Rng rng(s);
  return sample(d, rng);
}

double joint_size(std::span<const DiscreteDist* const> dists) {
  double n = 1.0;
  for (const auto* d : dists) n *= static_cast<double>(d->size());
  return n;
}

double joint_size(std::span<const DiscreteDist> dists) {
  double n = 1.0;
  for (const auto& d : dists) n *= static_cast<double>(d.size());
  return n;
}

JointEnumerator::JointEnumerator(std::vector<const DiscreteDist*> dists, double cap)
    : dists_(std::move(dists)), idx_(dists_.size(), 0), values_(dists_.size(), 0.0) {
  total_ = joint_size(std::span<const DiscreteDist* const>(dists_));
  if (total_ > cap) throw EnumerationTooLarge("joint enumeration", total_, cap);
}

JointEnumerator::JointEnumerator(std::span<const DiscreteDist> dists, double cap)
    : JointEnumerator(
          [&] {
            std::vector<const DiscreteDist*> p;
            for (const auto& d : dists) p.push_back(&d);
            return p;
          }(),
          cap) {}

void JointEnumerator::refresh() {
  prob_ = 1.0;
  for (std::size_t i = 0; i < dists_.size(); ++i) {
    values_[i] = dists_[i]->value(idx_[i]);
    prob_ *= dists_[i]->prob(idx_[i]);
  }
}

bool JointEnumerator::next() {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    refresh();
    return true;
  }
  for (std::size_t i = dists_.size(); i-- > 0;) {
    if (++idx_[i] < dists_[i]->size()) {
      refresh();
      return true;
    }
    idx_[i] = 0;
  }
  done_ = true;
  return false;
}

std::vector<JointOutcome> enumerate_joint(std::span<const DiscreteDist> dists,
                                          double cap) {
  JointEnumerator e(dists, cap);
  std::vector<JointOutcome> out;
  out.reserve(static_cast<std::size_t>(e.total()));
  while (e.next()) out.push_back({e.values(), e.prob()});
  return out;
}

}  // namespace stochprobe
