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

// Runs strategies and oracles on one instance and collects a Report.

#ifndef STOCHPROBE_EXPERIMENT_HPP
#define STOCHPROBE_EXPERIMENT_HPP

#include <string>
#include <vector>

#include "stochprobe/common.hpp"
#include "stochprobe/gap.hpp"
#include "stochprobe/instance_io.hpp"
#include "stochprobe/oracle.hpp"
#include "stochprobe/report.hpp"

namespace stochprobe {

struct ExperimentConfig {
  Instance instance;
  std::string label;
  /// Any of "none", "all", "nonadaptive".
  std::vector<std::string> strategies{"none", "all", "nonadaptive"};
  bool oracle = false;  ///< adds OPT_h(C) and the soft-budget bound to every row
  double eps = 0.1;
  EvalOptions opts;
  double state_cap = kDefaultStateCap;
};

/// Expected post-probe value of probing exactly `probed`. `eps` only
/// matters for makespan, where it picks the threshold.
PolicyValue evaluate_probe_set(const Instance& inst, const IndexSet& probed, double eps,
                               const EvalOptions& opts);

Report run_experiment(const ExperimentConfig& config);

/// One row for an oracle: "hard", "soft-lb", "nonadaptive" or "outlier".
ReportRow run_oracle(const Instance& inst, const std::string& mode, const EvalOptions& opts,
                     double state_cap = kDefaultStateCap);

/// Scripted adaptive policy (exact, plus Monte Carlo when `with_mc`) and the
/// non-adaptive families of the gap construction.
Report run_gap_experiment(const GapInstanceSpec& spec, const EvalOptions& opts, bool with_mc);

/// "0 2 5"; "-" for the empty set.
std::string format_probe_set(const IndexSet& s);

}  // namespace stochprobe

#endif  // STOCHPROBE_EXPERIMENT_HPP
