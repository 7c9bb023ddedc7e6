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

#ifndef STOCHPROBE_GENERATORS_HPP
#define STOCHPROBE_GENERATORS_HPP

#include <cstddef>

#include "stochprobe/kmedian.hpp"
#include "stochprobe/makespan.hpp"
#include "stochprobe/metric.hpp"
#include "stochprobe/random.hpp"
#include "stochprobe/steiner.hpp"
#include "stochprobe/wct.hpp"

namespace stochprobe {

/// Random distribution with 1..max_support atoms on a half-integer grid in [0, max_value].
DiscreteDist random_size_dist(Rng& rng, std::size_t max_support, double max_value);

/// Jobs with weights in (0, 5], integer costs 1..3, budget in [max c, sum c].
WctInstance random_wct_instance(Rng& rng, std::size_t n, std::size_t max_support);

MakespanInstance random_makespan_instance(Rng& rng, std::size_t n, std::size_t max_support,
                                          int machines);

/// Integer coordinates in [0, 10]^2 with the given norm.
PointSet random_point_set(Rng& rng, std::size_t points, Norm norm);

/// Nodes over random point subsets with 1..max_support atoms and costs 1..3.
NodeSet random_node_set(Rng& rng, const PointSet& ps, std::size_t nodes, std::size_t max_support);

KMedianInstance random_kmedian_instance(Rng& rng, std::size_t points, std::size_t nodes,
                                        std::size_t max_support, std::size_t k);

SteinerInstance random_steiner_instance(Rng& rng, std::size_t points, std::size_t nodes,
                                        std::size_t max_support);

}  // namespace stochprobe

#endif  // STOCHPROBE_GENERATORS_HPP
