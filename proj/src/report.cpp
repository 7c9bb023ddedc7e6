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

#include "stochprobe/report.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

#include "json.hpp"
#include "stochprobe/errors.hpp"

namespace stochprobe {

namespace {

using json = nlohmann::json;

constexpr std::array<const char*, 11> kColumns = {
    "strategy", "probe_set", "value",    "mode",      "half_width", "cost_max",
    "cost_exp", "opt_hard",  "opt_soft", "value/opt", "cost/C"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string num(const std::optional<double>& x) { return x ? num(*x) : ""; }

std::vector<std::string> cells(const ReportRow& r) {
  return {r.strategy,        r.probe_set,          num(r.value),         r.exact ? "exact" : "mc",
          num(r.half_width), num(r.cost_max),      num(r.cost_expected), num(r.oracle_hard),
          num(r.oracle_soft_lb), num(r.ratio_opt), num(r.ratio_budget)};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json opt_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::optional<double> opt_read(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

}  // namespace

void fill_ratios(ReportRow& row, double budget) {
  row.ratio_opt.reset();
  row.ratio_budget.reset();
  if (row.oracle_hard && *row.oracle_hard > 0.0) row.ratio_opt = row.value / *row.oracle_hard;
  if (budget > 0.0) row.ratio_budget = row.cost_max / budget;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "table") return ReportFormat::kTable;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw ValidationError("format", "expected table, csv or json");
}

std::string emit_report(const Report& report, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    json rows = json::array();
    for (const auto& r : report.rows)
      rows.push_back({{"strategy", r.strategy},
                      {"probe_set", r.probe_set},
                      {"value", r.value},
                      {"exact", r.exact},
                      {"half_width", r.half_width},
                      {"cost_max", r.cost_max},
                      {"cost_expected", r.cost_expected},
                      {"oracle_hard", opt_json(r.oracle_hard)},
                      {"oracle_soft_lb", opt_json(r.oracle_soft_lb)},
                      {"ratio_opt", opt_json(r.ratio_opt)},
                      {"ratio_budget", opt_json(r.ratio_budget)}});
    const json j = {{"objective", report.objective},
                    {"instance", report.instance},
                    {"budget", report.budget},
                    {"seed", report.seed},
                    {"rows", rows}};
    return j.dump(2) + "\n";
  }

  std::vector<std::vector<std::string>> table;
  table.emplace_back(kColumns.begin(), kColumns.end());
  for (const auto& r : report.rows) table.push_back(cells(r));

  std::string out;
  if (format == ReportFormat::kCsv) {
    for (const auto& row : table) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out += ',';
        out += csv_field(row[c]);
      }
      out += '\n';
    }
    return out;
  }
  std::vector<std::size_t> width(kColumns.size(), 0);
  for (const auto& row : table)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  for (const auto& row : table) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += "  ";
      // Text columns left-aligned, numbers right-aligned.
      const std::string pad(width[c] - row[c].size(), ' ');
      line += c < 2 || c == 3 ? row[c] + pad : pad + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  return out;
}

Report parse_report_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("report", e.what());
  }
  try {
    Report rep;
    rep.objective = j.at("objective").get<std::string>();
    rep.instance = j.at("instance").get<std::string>();
    rep.budget = j.at("budget").get<double>();
    rep.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& r : j.at("rows")) {
      ReportRow row;
      row.strategy = r.at("strategy").get<std::string>();
      row.probe_set = r.at("probe_set").get<std::string>();
      row.value = r.at("value").get<double>();
      row.exact = r.at("exact").get<bool>();
      row.half_width = r.at("half_width").get<double>();
      row.cost_max = r.at("cost_max").get<double>();
      row.cost_expected = r.at("cost_expected").get<double>();
      row.oracle_hard = opt_read(r, "oracle_hard");
      row.oracle_soft_lb = opt_read(r, "oracle_soft_lb");
      row.ratio_opt = opt_read(r, "ratio_opt");
      row.ratio_budget = opt_read(r, "ratio_budget");
      rep.rows.push_back(std::move(row));
    }
    return rep;
  } catch (const json::exception& e) {
    throw ValidationError("report", e.what());
  }
}

}  // namespace stochprobe
