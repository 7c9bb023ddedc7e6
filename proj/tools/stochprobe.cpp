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

// Command-line front end: generate instances, run strategies and oracles,
// evaluate stored probe sets and re-emit reports.
//
// Exit codes: 0 success, 1 usage error, 2 invalid input, 3 enumeration cap
// exceeded, 4 internal error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stochprobe/errors.hpp"
#include "stochprobe/experiment.hpp"
#include "stochprobe/generators.hpp"
#include "stochprobe/instance_io.hpp"
#include "stochprobe/report.hpp"

namespace sp = stochprobe;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::size_t mc_trials = 100000;
  double eps = 0.1;
  double enum_cap = 1e5;
  unsigned threads = 1;
  std::string out;
  std::string format = "table";

  sp::EvalOptions opts() const {
    sp::EvalOptions o;
    o.seed = seed;
    o.mc_trials = mc_trials;
    o.enum_cap = enum_cap;
    o.threads = threads;
    return o;
  }
};

void write_out(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw sp::ValidationError("out", "cannot write " + g.out);
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sp::ValidationError("file", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

sp::IndexSet parse_index_list(const std::string& s) {
  sp::IndexSet out;
  std::string tok;
  std::istringstream in(s);
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw sp::ValidationError("probe", "not an index: '" + tok + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// {"probe_set": [i, ...]}
sp::IndexSet read_policy(const std::string& path) {
  const auto j = nlohmann::json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("probe_set") || !j["probe_set"].is_array())
    throw sp::ValidationError("policy", path + ": expected {\"probe_set\": [...]}");
  sp::IndexSet s;
  for (const auto& v : j["probe_set"]) {
    if (!v.is_number_unsigned()) throw sp::ValidationError("policy.probe_set", "expected indices");
    s.push_back(v.get<std::size_t>());
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probing strategies for stochastic scheduling, clustering and Steiner trees"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Globals g;
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--mc-trials", g.mc_trials, "Monte Carlo trials when enumeration is too large")
      ->capture_default_str();
  app.add_option("--eps", g.eps, "Threshold grid step for makespan")->capture_default_str();
  app.add_option("--enum-cap", g.enum_cap, "Largest joint outcome count evaluated exactly")
      ->capture_default_str();
  app.add_option("--threads", g.threads, "Monte Carlo worker threads")->capture_default_str();
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_option("--format", g.format, "Report format")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance file");
  gen->require_subcommand(1);
  std::size_t bn = 20;
  auto* gen_benefit = gen->add_subcommand("benefit", "Weighted completion time benefit instance");
  gen_benefit->add_option("--n", bn, "Jobs")->capture_default_str();
  sp::GapInstanceSpec gs;
  auto* gen_gap = gen->add_subcommand("gap", "K-median instance with arbitrary centers");
  gen_gap->add_option("--copies", gs.copies, "M")->capture_default_str();
  gen_gap->add_option("--pairs", gs.pairs, "t")->capture_default_str();
  gen_gap->add_option("--r", gs.r, "r")->capture_default_str();
  std::string robj = "wct";
  std::size_t rn = 6, rsupport = 3, rpoints = 6, rk = 2;
  int rmachines = 2;
  auto* gen_random = gen->add_subcommand("random", "Random instance");
  gen_random->add_option("--objective", robj, "Objective")
      ->check(CLI::IsMember({"wct", "makespan", "kmedian", "steiner"}))
      ->capture_default_str();
  gen_random->add_option("--n", rn, "Jobs or nodes")->capture_default_str();
  gen_random->add_option("--support", rsupport, "Largest support size")->capture_default_str();
  gen_random->add_option("--points", rpoints, "Points (metric objectives)")->capture_default_str();
  gen_random->add_option("--k", rk, "K (k-median)")->capture_default_str();
  gen_random->add_option("--machines", rmachines, "Machines (makespan)")->capture_default_str();

  // solve
  std::string instance_path;
  std::vector<std::string> strategies;
  bool with_oracle = false;
  auto* solve = app.add_subcommand("solve", "Run probing strategies on an instance");
  solve->add_option("instance", instance_path, "Instance file")->required();
  solve->add_option("--strategy", strategies, "none | all | nonadaptive (repeatable)")
      ->check(CLI::IsMember({"none", "all", "nonadaptive"}));
  solve->add_flag("--oracle", with_oracle, "Add exact adaptive and non-adaptive optima");

  // oracle
  std::string mode = "hard";
  auto* oracle = app.add_subcommand("oracle", "Exact optimum of a small instance");
  oracle->add_option("instance", instance_path, "Instance file")->required();
  oracle->add_option("--mode", mode, "hard | soft-lb | nonadaptive | outlier")
      ->check(CLI::IsMember({"hard", "soft-lb", "nonadaptive", "outlier"}))
      ->capture_default_str();

  // eval
  std::string probe_list, policy_path;
  auto* eval = app.add_subcommand("eval", "Evaluate a fixed probe set");
  eval->add_option("instance", instance_path, "Instance file")->required();
  auto* probe_opt = eval->add_option("--probe", probe_list, "Comma-separated item indices");
  auto* policy_opt = eval->add_option("--policy", policy_path, "JSON file {\"probe_set\": [...]}");
  probe_opt->excludes(policy_opt);

  // gap
  bool gap_mc = false;
  auto* gap = app.add_subcommand("gap", "Scripted adaptive policy vs non-adaptive families");
  gap->add_option("--copies", gs.copies, "M")->capture_default_str();
  gap->add_option("--pairs", gs.pairs, "t")->capture_default_str();
  gap->add_option("--r", gs.r, "r")->capture_default_str();
  gap->add_flag("--mc", gap_mc, "Also simulate the scripted policy");

  // report
  std::string report_path;
  auto* report = app.add_subcommand("report", "Re-emit a JSON report");
  report->add_option("report", report_path, "Report JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const auto fmt = sp::parse_report_format(g.format);
    if (gen->parsed()) {
      sp::Instance inst;
      if (gen_benefit->parsed()) {
        inst = sp::gen_benefit_instance(bn);
      } else if (gen_gap->parsed()) {
        inst = sp::gen_gap_instance(gs).inst;
      } else {
        sp::Rng rng({g.seed, 0});
        if (robj == "wct") inst = sp::random_wct_instance(rng, rn, rsupport);
        else if (robj == "makespan") inst = sp::random_makespan_instance(rng, rn, rsupport, rmachines);
        else if (robj == "kmedian") inst = sp::random_kmedian_instance(rng, rpoints, rn, rsupport, rk);
        else inst = sp::random_steiner_instance(rng, rpoints, rn, rsupport);
      }
      write_out(g, sp::emit_instance(inst));
      return 0;
    }
    if (solve->parsed()) {
      sp::ExperimentConfig cfg;
      cfg.instance = sp::parse_instance(instance_path);
      cfg.label = instance_path;
      if (!strategies.empty()) cfg.strategies = strategies;
      cfg.oracle = with_oracle;
      cfg.eps = g.eps;
      cfg.opts = g.opts();
      write_out(g, sp::emit_report(sp::run_experiment(cfg), fmt));
      return 0;
    }
    if (oracle->parsed()) {
      const auto inst = sp::parse_instance(instance_path);
      sp::Report rep;
      rep.objective = sp::objective_name(inst);
      rep.instance = instance_path;
      rep.budget = sp::instance_budget(inst);
      rep.seed = g.seed;
      rep.rows.push_back(sp::run_oracle(inst, mode, g.opts()));
      write_out(g, sp::emit_report(rep, fmt));
      return 0;
    }
    if (eval->parsed()) {
      const auto inst = sp::parse_instance(instance_path);
      const auto S = policy_opt->count() ? read_policy(policy_path) : parse_index_list(probe_list);
      const auto pv = sp::evaluate_probe_set(inst, S, g.eps, g.opts());
      sp::Report rep;
      rep.objective = sp::objective_name(inst);
      rep.instance = instance_path;
      rep.budget = sp::instance_budget(inst);
      rep.seed = g.seed;
      sp::ReportRow row;
      row.strategy = "fixed";
      row.probe_set = sp::format_probe_set(S);
      row.value = pv.value;
      row.exact = pv.exact;
      row.half_width = pv.half_width;
      row.cost_max = row.cost_expected = pv.probe_cost;
      sp::fill_ratios(row, rep.budget);
      rep.rows.push_back(row);
      write_out(g, sp::emit_report(rep, fmt));
      return 0;
    }
    if (gap->parsed()) {
      write_out(g, sp::emit_report(sp::run_gap_experiment(gs, g.opts(), gap_mc), fmt));
      return 0;
    }
    if (report->parsed()) {
      write_out(g, sp::emit_report(sp::parse_report_json(read_file(report_path)), fmt));
      return 0;
    }
  } catch (const sp::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const sp::EnumerationTooLarge& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 4;
  }
  return 1;
}
