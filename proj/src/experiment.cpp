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

#include "stochprobe/experiment.hpp"

#include <cstdint>
#include <variant>

#include "stochprobe/errors.hpp"
#include "stochprobe/metric.hpp"

namespace stochprobe {

namespace {

// FNV-1a, so stream ids do not depend on the standard library's hash.
std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

std::vector<double> costs_of(const Instance& inst) {
  return std::visit([](const auto& x) { return x.costs(); }, inst);
}

std::size_t size_of(const Instance& inst) {
  return std::visit([](const auto& x) { return x.size(); }, inst);
}

const PointSet* points_of(const Instance& inst) {
  if (const auto* k = std::get_if<KMedianInstance>(&inst)) return &k->points;
  if (const auto* s = std::get_if<SteinerInstance>(&inst)) return &s->points;
  return nullptr;
}

const NodeSet* nodes_of(const Instance& inst) {
  if (const auto* k = std::get_if<KMedianInstance>(&inst)) return &k->nodes;
  if (const auto* s = std::get_if<SteinerInstance>(&inst)) return &s->nodes;
  return nullptr;
}

// Calls fn with the oracle model; metric models borrow `d`, which lives here.
template <class Fn>
auto with_model(const Instance& inst, Fn&& fn) {
  ExtendedMetric d;
  if (const auto* ps = points_of(inst)) d = build_extended_metric(*ps, *nodes_of(inst));
  ProbingModel model;
  if (const auto* w = std::get_if<WctInstance>(&inst)) model = wct_model(*w);
  else if (const auto* m = std::get_if<MakespanInstance>(&inst)) model = makespan_model(*m);
  else if (const auto* k = std::get_if<KMedianInstance>(&inst)) model = kmedian_model(*k, d);
  else model = steiner_model(std::get<SteinerInstance>(inst), d);
  return fn(static_cast<const ProbingModel&>(model));
}

ReportRow nonadaptive_row(const Instance& inst, double eps, const EvalOptions& opts) {
  ReportRow row;
  row.strategy = "nonadaptive";
  PolicyValue pv;
  if (const auto* w = std::get_if<WctInstance>(&inst)) {
    const auto p = wct_nonadaptive(*w);
    pv.probe_set = p.probe_set;
    pv.probe_cost = p.probe_cost;
    pv.value = p.value;
  } else if (const auto* m = std::get_if<MakespanInstance>(&inst)) {
    pv = makespan_nonadaptive(*m, eps, opts).eval.value;
  } else if (const auto* k = std::get_if<KMedianInstance>(&inst)) {
    const auto d = build_extended_metric(k->points, k->nodes);
    pv = kmedian_nonadaptive(*k, d, opts).value;
  } else {
    const auto& s = std::get<SteinerInstance>(inst);
    const auto d = build_extended_metric(s.points, s.nodes);
    pv = steiner_nonadaptive(s, d, opts).value;
  }
  row.probe_set = format_probe_set(pv.probe_set);
  row.value = pv.value;
  row.exact = pv.exact;
  row.half_width = pv.half_width;
  row.cost_max = row.cost_expected = set_cost(pv.probe_set, costs_of(inst));
  return row;
}

ReportRow fixed_set_row(const std::string& name, const Instance& inst, const IndexSet& S,
                        double eps, const EvalOptions& opts) {
  const auto pv = evaluate_probe_set(inst, S, eps, opts);
  ReportRow row;
  row.strategy = name;
  row.probe_set = format_probe_set(S);
  row.value = pv.value;
  row.exact = pv.exact;
  row.half_width = pv.half_width;
  row.cost_max = row.cost_expected = set_cost(S, costs_of(inst));
  return row;
}

}  // namespace

std::string format_probe_set(const IndexSet& s) {
  if (s.empty()) return "-";
  std::string out;
  for (auto i : s) {
    if (!out.empty()) out += ' ';
    out += std::to_string(i);
  }
  return out;
}

PolicyValue evaluate_probe_set(const Instance& inst, const IndexSet& probed, double eps,
                               const EvalOptions& opts) {
  const std::size_t n = size_of(inst);
  for (auto i : probed)
    if (i >= n) throw ValidationError("probe_set", "index " + std::to_string(i) + " out of range");
  PolicyValue pv;
  if (const auto* w = std::get_if<WctInstance>(&inst)) {
    pv.value = wct_policy_value(*w, probed);
  } else if (const auto* m = std::get_if<MakespanInstance>(&inst)) {
    const double t = threshold_for_set(*m, probed, eps);
    pv = evaluate_makespan_policy(*m, makespan_policy_for_set(*m, probed, t), opts).value;
  } else if (const auto* k = std::get_if<KMedianInstance>(&inst)) {
    const auto d = build_extended_metric(k->points, k->nodes);
    pv = kmedian_policy_value(*k, d, probed, opts);
  } else {
    const auto& s = std::get<SteinerInstance>(inst);
    const auto d = build_extended_metric(s.points, s.nodes);
    pv = steiner_policy_value(s, d, probed, opts);
  }
  pv.probe_set = probed;
  pv.probe_cost = set_cost(probed, costs_of(inst));
  return pv;
}

ReportRow run_oracle(const Instance& inst, const std::string& mode, const EvalOptions& opts,
                     double state_cap) {
  const double budget = instance_budget(inst);
  ReportRow row;
  row.strategy = "oracle-" + mode;
  with_model(inst, [&](const ProbingModel& model) {
    if (mode == "hard") {
      const auto r = adaptive_opt_hard(model, budget, state_cap);
      row.probe_set = "adaptive";
      row.value = r.value;
      row.cost_max = r.max_cost;
      row.cost_expected = r.expected_cost;
    } else if (mode == "soft-lb") {
      const auto grid = default_lambda_grid();
      const auto r = adaptive_opt_soft_lb(model, budget, grid, state_cap);
      row.probe_set = "bound";
      row.value = r.lower_bound;
    } else if (mode == "nonadaptive") {
      const auto r = nonadaptive_opt(model, budget, opts.enum_cap);
      row.probe_set = format_probe_set(r.probe_set);
      row.value = r.value;
      row.cost_max = row.cost_expected = r.max_cost;
    } else if (mode == "outlier") {
      const auto r = exact_outlier_opt(model, budget);
      row.probe_set = format_probe_set(r.probe_set);
      row.value = r.value;
      row.cost_max = row.cost_expected = r.max_cost;
    } else {
      throw ValidationError("mode", "expected hard, soft-lb, nonadaptive or outlier");
    }
    return 0;
  });
  fill_ratios(row, budget);
  return row;
}

Report run_experiment(const ExperimentConfig& config) {
  const Instance& inst = config.instance;
  Report rep;
  rep.objective = objective_name(inst);
  rep.instance = config.label;
  rep.budget = instance_budget(inst);
  rep.seed = config.opts.seed;

  EvalOptions opts = config.opts;
  for (const auto& name : config.strategies) {
    // Each strategy draws from its own stream so that adding or reordering
    // strategies does not change the others' estimates.
    opts.stream = config.opts.stream + name_hash(name);
    try {
      if (name == "none") rep.rows.push_back(fixed_set_row(name, inst, {}, config.eps, opts));
      else if (name == "all")
        rep.rows.push_back(fixed_set_row(name, inst, full_set(size_of(inst)), config.eps, opts));
      else if (name == "nonadaptive") rep.rows.push_back(nonadaptive_row(inst, config.eps, opts));
      else throw ValidationError("strategy", "unknown strategy '" + name + "'");
    } catch (const EnumerationTooLarge& e) {
      throw EnumerationTooLarge("strategy " + name, e.size(), e.cap());
    } catch (const SolverError& e) {
      throw SolverError("strategy " + name + ": " + e.what());
    }
  }

  if (config.oracle) {
    auto hard = run_oracle(inst, "hard", opts, config.state_cap);
    const auto soft = run_oracle(inst, "soft-lb", opts, config.state_cap);
    auto nonad = run_oracle(inst, "nonadaptive", opts, config.state_cap);
    rep.rows.push_back(hard);
    rep.rows.push_back(nonad);
    for (auto& row : rep.rows) {
      row.oracle_hard = hard.value;
      row.oracle_soft_lb = soft.value;
    }
  }
  for (auto& row : rep.rows) fill_ratios(row, rep.budget);
  return rep;
}

Report run_gap_experiment(const GapInstanceSpec& spec, const EvalOptions& opts, bool with_mc) {
  const auto g = gen_gap_instance(spec);
  const auto d = build_extended_metric(g.inst.points, g.inst.nodes);
  Report rep;
  rep.objective = "kmedian";
  rep.instance = "gap M=" + std::to_string(spec.copies) + " t=" + std::to_string(spec.pairs) +
                 " r=" + std::to_string(spec.r);
  rep.budget = g.inst.budget;
  rep.seed = opts.seed;

  const double cost_all = set_cost(full_set(g.inst.size()), g.inst.costs());
  const auto ex = scripted_adaptive_exact(g, d);
  ReportRow a;
  a.strategy = "scripted-adaptive";
  a.probe_set = "adaptive";
  a.value = ex.value;
  a.cost_max = cost_all;
  a.cost_expected = ex.expected_cost;
  rep.rows.push_back(a);
  if (with_mc) {
    const auto mc = scripted_adaptive_mc(g, d, opts);
    ReportRow b = a;
    b.strategy = "scripted-adaptive-mc";
    b.value = mc.value;
    b.exact = false;
    b.half_width = mc.half_width;
    b.cost_expected = mc.expected_cost;
    rep.rows.push_back(b);
  }
  for (const auto& f : gap_nonadaptive_families(g, d, g.inst.budget)) {
    ReportRow r;
    r.strategy = f.name;
    r.probe_set = f.affordable ? "within-budget" : "over-budget";
    r.value = f.value;
    r.cost_max = r.cost_expected = f.cost;
    rep.rows.push_back(r);
  }
  for (auto& row : rep.rows) fill_ratios(row, rep.budget);
  return rep;
}

}  // namespace stochprobe
