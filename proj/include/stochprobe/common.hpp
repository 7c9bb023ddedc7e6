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

#ifndef STOCHPROBE_COMMON_HPP
#define STOCHPROBE_COMMON_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

#include "stochprobe/random.hpp"

namespace stochprobe {

/// Sorted, duplicate-free list of item indices.
using IndexSet = std::vector<std::size_t>;

inline IndexSet mask_to_set(std::uint64_t mask, std::size_t n) {
  IndexSet s;
  for (std::size_t i = 0; i < n; ++i)
    if (mask >> i & 1U) s.push_back(i);
  return s;
}

inline std::uint64_t set_to_mask(const IndexSet& s) {
  std::uint64_t m = 0;
  for (auto i : s) m |= std::uint64_t{1} << i;
  return m;
}

inline std::vector<bool> set_to_flags(const IndexSet& s, std::size_t n) {
  std::vector<bool> f(n, false);
  for (auto i : s) f[i] = true;
  return f;
}

inline IndexSet complement(const IndexSet& s, std::size_t n) {
  const auto f = set_to_flags(s, n);
  IndexSet c;
  for (std::size_t i = 0; i < n; ++i)
    if (!f[i]) c.push_back(i);
  return c;
}

inline IndexSet full_set(std::size_t n) {
  IndexSet s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = i;
  return s;
}

inline double set_cost(const IndexSet& s, std::span<const double> costs) {
  double c = 0.0;
  for (auto i : s) c += costs[i];
  return c;
}

/// Budget comparison with a small absolute slack for accumulated rounding.
inline bool within_budget(double cost, double budget) { return cost <= budget + 1e-9; }

/// Knobs shared by every expected-value evaluator.
struct EvalOptions {
  double enum_cap = 1e5;             ///< exact enumeration when joint outcomes <= cap
  std::size_t mc_trials = 100000;    ///< otherwise Monte Carlo with this many draws
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;          ///< distinguishes evaluations sharing a seed
  unsigned threads = 1;
};

/// Non-adaptive policy evaluated in expectation.
struct PolicyValue {
  IndexSet probe_set;
  double probe_cost = 0.0;
  double value = 0.0;
  double half_width = 0.0;  ///< 95% normal half-width; zero when exact
  bool exact = true;
};

/// Output of an outlier-selection routine.
struct OutlierSelection {
  IndexSet outliers;
  double cost = 0.0;
  double value = 0.0;      ///< objective on the kept items, no probing
  bool exhaustive = false;
};

struct McEstimate {
  double mean = 0.0;
  double half_width = 0.0;
  std::size_t trials = 0;
};

inline constexpr std::size_t kMcChunk = 4096;

/// Deterministic Monte Carlo: trials are cut into fixed-size chunks, chunk c
/// draws from stream mix64(base.stream_id) + c, and chunk sums are combined in
/// chunk order. The estimate is therefore identical for any thread count.
template <class SampleFn>
McEstimate monte_carlo(std::size_t trials, const SeedSpec& base, unsigned threads,
                       SampleFn&& draw) {
  McEstimate est;
  if (trials == 0) return est;
  const std::size_t chunks = (trials + kMcChunk - 1) / kMcChunk;
  std::vector<double> sum(chunks, 0.0), sum_sq(chunks, 0.0);
  auto run_chunk = [&](std::size_t c) {
    Rng rng(SeedSpec{base.master_seed, mix64(base.stream_id) + c});
    const std::size_t lo = c * kMcChunk;
    const std::size_t hi = std::min(trials, lo + kMcChunk);
    double s = 0.0, s2 = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
      const double x = draw(rng);
      s += x;
      s2 += x * x;
    }
    sum[c] = s;
    sum_sq[c] = s2;
  };
  const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
  if (workers == 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < chunks; c += workers) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }
  double s = 0.0, s2 = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    s += sum[c];
    s2 += sum_sq[c];
  }
  const auto n = static_cast<double>(trials);
  est.mean = s / n;
  const double var = n > 1 ? std::max(0.0, (s2 - n * est.mean * est.mean) / (n - 1)) : 0.0;
  est.half_width = 1.96 * std::sqrt(var / n);
  est.trials = trials;
  return est;
}

}  // namespace stochprobe

#endif  // STOCHPROBE_COMMON_HPP
