// Copyright 2026 The Authors.
//
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

#include "dtdd/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace dtdd {

GreedyObjectiveTerms objective_terms(const Scenario& scenario, const PowerConfig& powers,
                                     const IndexSet& ue_ul, const IndexSet& ue_dl,
                                     double sinr_floor, double sinr_cap) {
  if (!(sinr_floor > 0.0 && sinr_floor < sinr_cap)) {
    throw ConfigError("scheduler: need 0 < sinr_floor < sinr_cap");
  }
  const std::size_t num_aps = scenario.num_aps();
  const std::size_t num_ues = scenario.num_ues();
  const auto& a2 = scenario.stats.alpha_sq;
  const auto& beta = scenario.geometry.beta;
  const auto& ep = scenario.pilot.pilot_power;

  Schedule all_dl;
  all_dl.ap_dl = iota_set(num_aps);
  all_dl.ue_dl = ue_dl;
  const RealMatrix kappa = dl_power_coeffs(scenario.stats, all_dl, scenario.geometry.antennas());

  GreedyObjectiveTerms t;
  t.sinr_floor = sinr_floor;
  t.sinr_cap = sinr_cap;
  t.g_u = RealMatrix::Zero(num_aps, num_ues);
  t.i_u = RealMatrix::Zero(num_aps, num_ues);
  t.g_d = RealMatrix::Zero(num_aps, num_ues);
  t.i_d = RealMatrix::Zero(num_aps, num_ues);
  for (std::size_t m = 0; m < num_aps; ++m) {
    for (auto k : ue_ul) {
      t.g_u(m, k) = std::sqrt(powers.ul_power[k]) * a2(m, k);
      for (auto n : scenario.copilots[k]) {
        if (!contains(ue_ul, n)) continue;
        t.i_u(m, k) += std::sqrt(powers.ul_power[n]) * a2(m, k) * std::sqrt(ep[n] / ep[k]) *
                       beta(m, n) / beta(m, k);
      }
    }
    const double sqrt_ed = std::sqrt(powers.dl_power[m]);
    for (auto n : ue_dl) {
      t.g_d(m, n) = kappa(m, n) * sqrt_ed * a2(m, n);
      for (auto q : scenario.copilots[n]) {
        if (!contains(ue_dl, q)) continue;
        t.i_d(m, n) += sqrt_ed * kappa(m, q) * a2(m, q) * std::sqrt(ep[n] / ep[q]) * beta(m, n) / beta(m, q);
      }
    }
  }
  return t;
}

namespace {

double ratio_over(std::size_t ue, const IndexSet& aps, const RealMatrix& g, const RealMatrix& i) {
  double gain = 0.0;
  double interference = 0.0;
  for (auto m : aps) {
    gain += g(m, ue);
    interference += i(m, ue);
  }
  if (gain <= 0.0) return 0.0;
  if (interference <= 0.0) return std::numeric_limits<double>::infinity();
  return gain / interference;
}

}  // namespace

double surrogate_ratio(std::size_t ue, const Schedule& schedule, const GreedyObjectiveTerms& terms) {
  if (contains(schedule.ue_ul, ue)) return ratio_over(ue, schedule.ap_ul, terms.g_u, terms.i_u);
  return ratio_over(ue, schedule.ap_dl, terms.g_d, terms.i_d);
}

double lower_bound_cost(const Schedule& schedule, const GreedyObjectiveTerms& terms) {
  double cost = 0.0;
  auto add = [&](std::size_t k, const IndexSet& aps, const RealMatrix& g, const RealMatrix& i) {
    const double r = std::clamp(ratio_over(k, aps, g, i), terms.sinr_floor, terms.sinr_cap);
    cost += 2.0 * std::log2(r);
  };
  for (auto k : schedule.ue_ul) add(k, schedule.ap_ul, terms.g_u, terms.i_u);
  for (auto n : schedule.ue_dl) add(n, schedule.ap_dl, terms.g_d, terms.i_d);
  return cost;
}

SchedulingContext make_context(const Scenario& scenario, const PowerConfig& powers, IndexSet ue_ul,
                               IndexSet ue_dl) {
  powers.validate(scenario.num_aps(), scenario.num_ues());
  SchedulingContext ctx;
  ctx.scenario = &scenario;
  ctx.powers = &powers;
  ctx.terms = objective_terms(scenario, powers, ue_ul, ue_dl);
  ctx.ue_ul = std::move(ue_ul);
  ctx.ue_dl = std::move(ue_dl);
  return ctx;
}

namespace {

void insert_sorted(IndexSet& set, std::size_t value) {
  set.insert(std::upper_bound(set.begin(), set.end(), value), value);
}

}  // namespace

ScheduleSearchResult greedy_schedule(const SchedulingContext& context) {
  const std::size_t num_aps = context.scenario->num_aps();
  ScheduleSearchResult out;
  Schedule& s = out.schedule;
  s.ue_ul = context.ue_ul;
  s.ue_dl = context.ue_dl;
  out.baseline_value = lower_bound_cost(s, context.terms);
  out.objective_value = out.baseline_value;

  std::vector<bool> scheduled(num_aps, false);
  for (std::size_t step = 0; step < num_aps; ++step) {
    double best_ul = -std::numeric_limits<double>::infinity();
    double best_dl = best_ul;
    std::size_t arg_ul = num_aps;
    std::size_t arg_dl = num_aps;
    for (std::size_t m = 0; m < num_aps; ++m) {
      if (scheduled[m]) continue;
      Schedule trial = s;
      insert_sorted(trial.ap_ul, m);
      const double vu = lower_bound_cost(trial, context.terms);
      trial = s;
      insert_sorted(trial.ap_dl, m);
      const double vd = lower_bound_cost(trial, context.terms);
      out.evaluations += 2;
      if (vu > best_ul) {
        best_ul = vu;
        arg_ul = m;
      }
      if (vd > best_dl) {
        best_dl = vd;
        arg_dl = m;
      }
    }
    GreedyStep rec;
    // UL wins ties unless no UE demands UL; then the tie goes to DL.
    const bool pick_ul = best_ul > best_dl || (best_ul == best_dl && !context.ue_ul.empty());
    if (pick_ul) {
      rec = {arg_ul, 'U', best_ul};
      insert_sorted(s.ap_ul, arg_ul);
    } else {
      rec = {arg_dl, 'D', best_dl};
      insert_sorted(s.ap_dl, arg_dl);
    }
    scheduled[rec.ap] = true;
    out.objective_value = rec.objective;
    out.trace.push_back(rec);
  }
  return out;
}

Schedule schedule_from_mask(std::uint64_t mask, std::size_t num_aps, const IndexSet& ue_ul,
                            const IndexSet& ue_dl) {
  Schedule s;
  s.ue_ul = ue_ul;
  s.ue_dl = ue_dl;
  for (std::size_t m = 0; m < num_aps; ++m) {
    ((mask >> m) & 1u ? s.ap_dl : s.ap_ul).push_back(m);
  }
  return s;
}

ScheduleSearchResult exhaustive_schedule(const SchedulingContext& context, SearchMetric metric,
                                         Execution exec, std::size_t max_aps) {
  const std::size_t num_aps = context.scenario->num_aps();
  if (num_aps > max_aps || num_aps >= 63) {
    throw ConfigError("exhaustive search refuses M = " + std::to_string(num_aps) + " (cap " +
                      std::to_string(max_aps) + ")");
  }
  const std::size_t configs = std::size_t{1} << num_aps;
  std::vector<double> value(configs);
  for_each_index(configs, exec, [&](std::size_t mask) {
    const Schedule s = schedule_from_mask(mask, num_aps, context.ue_ul, context.ue_dl);
    value[mask] = metric == SearchMetric::kLowerBound
                      ? lower_bound_cost(s, context.terms)
                      : sum_se(s, *context.scenario, *context.powers).sum_se;
  });

  std::size_t best = 0;
  for (std::size_t mask = 1; mask < configs; ++mask) {
    if (value[mask] > value[best]) best = mask;
  }
  ScheduleSearchResult out;
  out.schedule = schedule_from_mask(best, num_aps, context.ue_ul, context.ue_dl);
  out.objective_value = value[best];
  Schedule empty;
  empty.ue_ul = context.ue_ul;
  empty.ue_dl = context.ue_dl;
  out.baseline_value = metric == SearchMetric::kLowerBound
                           ? lower_bound_cost(empty, context.terms)
                           : sum_se(empty, *context.scenario, *context.powers).sum_se;
  out.evaluations = configs;
  return out;
}

double product_sinr(const Schedule& schedule, const GreedyObjectiveTerms& terms, bool* clamped) {
  double f = 1.0;
  bool any = false;
  auto apply = [&](double r) {
    if (r <= 0.0 || std::isinf(r)) {
      any = true;
      r = std::clamp(r, terms.sinr_floor, terms.sinr_cap);
    }
    f *= r;
  };
  for (auto k : schedule.ue_ul) apply(ratio_over(k, schedule.ap_ul, terms.g_u, terms.i_u));
  for (auto n : schedule.ue_dl) apply(ratio_over(n, schedule.ap_dl, terms.g_d, terms.i_d));
  if (clamped != nullptr) *clamped = any;
  return f;
}

AuditReport submodularity_audit(const SchedulingContext& context, std::size_t trials, Rng& rng,
                                double rel_tol) {
  const std::size_t num_aps = context.scenario->num_aps();
  AuditReport report;
  if (num_aps < 1) return report;
  std::bernoulli_distribution coin(0.5);
  std::vector<std::size_t> order(num_aps);

  Schedule base;
  base.ue_ul = context.ue_ul;
  base.ue_dl = context.ue_dl;
  for (std::size_t t = 0; t < trials; ++t) {
    ++report.trials;
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t j = order[0];
    const bool j_dl = coin(rng);

    Schedule s_small = base;
    Schedule s_large = base;
    for (std::size_t i = 1; i < num_aps; ++i) {
      if (!coin(rng)) continue;
      const bool dl = coin(rng);
      const bool also_small = coin(rng);
      insert_sorted(dl ? s_large.ap_dl : s_large.ap_ul, order[i]);
      if (also_small) insert_sorted(dl ? s_small.ap_dl : s_small.ap_ul, order[i]);
    }
    Schedule s_small_j = s_small;
    Schedule s_large_j = s_large;
    insert_sorted(j_dl ? s_small_j.ap_dl : s_small_j.ap_ul, j);
    insert_sorted(j_dl ? s_large_j.ap_dl : s_large_j.ap_ul, j);

    bool c1 = false, c2 = false, c3 = false, c4 = false;
    const double fs = product_sinr(s_small, context.terms, &c1);
    const double fsj = product_sinr(s_small_j, context.terms, &c2);
    const double ft = product_sinr(s_large, context.terms, &c3);
    const double ftj = product_sinr(s_large_j, context.terms, &c4);
    if (c1 || c2 || c3 || c4) {
      ++report.clamped;
      continue;
    }
    ++report.evaluated;
    const double scale = std::max({std::abs(fs), std::abs(fsj), std::abs(ft), std::abs(ftj)});
    const double gap = (ftj - ft) - (fsj - fs);
    if (gap > rel_tol * scale) {
      ++report.submodularity_violations;
      report.worst_relative_violation = std::max(report.worst_relative_violation, gap / scale);
    }
    if (fs - fsj > rel_tol * scale) ++report.monotonicity_violations;
  }
  return report;
}

}  // namespace dtdd
