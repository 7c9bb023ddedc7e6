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

// JSON instance files. See README.md for the schema.

#ifndef STOCHPROBE_INSTANCE_IO_HPP
#define STOCHPROBE_INSTANCE_IO_HPP

#include <string>
#include <string_view>
#include <variant>

#include "stochprobe/kmedian.hpp"
#include "stochprobe/makespan.hpp"
#include "stochprobe/steiner.hpp"
#include "stochprobe/wct.hpp"

namespace stochprobe {

using Instance = std::variant<WctInstance, MakespanInstance, KMedianInstance, SteinerInstance>;

/// Probability sums within this distance of one are accepted and rescaled.
inline constexpr double kParseProbTolerance = 1e-9;

/// "wct", "makespan", "kmedian" or "steiner".
std::string objective_name(const Instance& inst);

/// Parses and validates. Throws ValidationError whose field is the JSON path
/// of the offending value (e.g. "items[2].cost") and whose message starts
/// with its line number.
Instance parse_instance_text(std::string_view text);
Instance parse_instance(const std::string& path);

/// Pretty-printed JSON; doubles are written with round-trip precision.
std::string emit_instance(const Instance& inst);

/// Budget of any instance kind.
double instance_budget(const Instance& inst);

}  // namespace stochprobe

#endif  // STOCHPROBE_INSTANCE_IO_HPP
