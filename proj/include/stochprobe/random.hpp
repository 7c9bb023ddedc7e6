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

#ifndef STOCHPROBE_RANDOM_HPP
#define STOCHPROBE_RANDOM_HPP

#include <cstdint>
#include <random>

namespace stochprobe {

/// Identifies one reproducible random stream.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

/// SplitMix64 finalizer, used to derive well-mixed stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t stream_seed(const SeedSpec& s) {
  return mix64(s.master_seed ^ mix64(s.stream_id + 0x632be59bd9b4e019ULL));
}

/// A 64-bit Mersenne Twister stream keyed by (master_seed, stream_id).
///
/// mt19937_64 output is fixed by the standard, and uniform() maps the top
/// 53 bits directly instead of going through std::uniform_real_distribution,
/// whose output is implementation-defined. Streams are therefore bit-identical
/// across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(const SeedSpec& s) : engine_(stream_seed(s)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Rejection-free multiply-shift; bias < n / 2^64.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace stochprobe

#endif  // STOCHPROBE_RANDOM_HPP
