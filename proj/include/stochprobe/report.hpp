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

#ifndef STOCHPROBE_REPORT_HPP
#define STOCHPROBE_REPORT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stochprobe {

struct ReportRow {
  std::string strategy;
  std::string probe_set;  ///< space-separated indices, or a policy id
  double value = 0.0;
  bool exact = true;
  double half_width = 0.0;
  double cost_max = 0.0;
  double cost_expected = 0.0;
  std::optional<double> oracle_hard;     ///< OPT_h(C) when the oracle ran
  std::optional<double> oracle_soft_lb;
  std::optional<double> ratio_opt;       ///< value / oracle_hard
  std::optional<double> ratio_budget;    ///< cost_max / C

  bool operator==(const ReportRow&) const = default;
};

struct Report {
  std::string objective;
  std::string instance;
  double budget = 0.0;
  std::uint64_t seed = 0;
  std::vector<ReportRow> rows;

  bool operator==(const Report&) const = default;
};

enum class ReportFormat { kTable, kCsv, kJson };

/// Fills the ratio columns from the operands present; a ratio whose
/// denominator is missing or zero stays empty.
void fill_ratios(ReportRow& row, double budget);

/// "table" | "csv" | "json"; throws ValidationError otherwise.
ReportFormat parse_report_format(std::string_view name);

/// Table and CSV print numbers at 6 significant digits; JSON keeps full
/// precision so that parse_report_json recovers an equal report.
std::string emit_report(const Report& report, ReportFormat format);

Report parse_report_json(std::string_view text);

}  // namespace stochprobe

#endif  // STOCHPROBE_REPORT_HPP
