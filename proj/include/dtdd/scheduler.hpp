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

#ifndef DTDD_SCHEDULER_HPP_
#define DTDD_SCHEDULER_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dtdd/parallel.hpp"
#include "dtdd/se_closed_form.hpp"

namespace dtdd {

// Per-link gain and pilot-contamination terms of the product-SINR surrogate.
// kappa_jn depends on A_d only through whether j itself is a DL AP, so the DL
// terms are evaluated once as if every AP were in DL mode and the surrogate of
// any schedule is a sum over its serving sets.
struct GreedyObjectiveTerms {
  RealMatrix g_u;
  RealMatrix i_u;
  RealMatrix g_d;
  RealMatrix i_d;
  double sinr_floor = 1e-9;
  double sinr_cap = 1e9;
};

GreedyObjectiveTerms objective_terms(const Scenario& scenario, const PowerConfig& powers,
                                     const IndexSet& ue_ul, const IndexSet& ue_dl,
                                     double sinr_floor = 1e-9, double sinr_cap = 1e9);

// Surrogate ratio sum G / sum I of one UE under a schedule, before clamping.
// Returns 0 for unserved UEs and +inf when the interference sum vanishes.
double surrogate_ratio(std::size_t ue, const Schedule& schedule, const GreedyObjectiveTerms& terms);

// sum_k 2 log2(clamp(ratio_k, floor, cap)).
double lower_bound_cost(const Schedule& schedule, const GreedyObjectiveTerms& terms);

struct SchedulingContext {
  const Scenario* scenario = nullptr;
  const PowerConfig* powers = nullptr;
  IndexSet ue_ul;
  IndexSet ue_dl;
  GreedyObjectiveTerms terms;
};

SchedulingContext make_context(const Scenario& scenario, const PowerConfig& powers, IndexSet ue_ul,
                               IndexSet ue_dl);

struct GreedyStep {
  std::size_t ap = 0;
  char mode = 'U';
  double objective = 0.0;
};

struct ScheduleSearchResult {
  Schedule schedule;
  double objective_value = 0.0;
  // Objective of the empty schedule; greedy guarantees are stated relative to it.
  double baseline_value = 0.0;
  std::size_t evaluations = 0;
  std::vector<GreedyStep> trace;
};

// Greedy AP scheduling: every step tries each unscheduled AP in both modes
// against the full current schedule and commits the best (UL wins ties, then
// the lowest AP index). Without UL demand, ties go to DL instead.
ScheduleSearchResult greedy_schedule(const SchedulingContext& context);

enum class SearchMetric { kLowerBound, kTrueSumSe };

inline constexpr std::size_t kDefaultExhaustiveCap = 16;

// Enumerates all 2^M UL/DL splits (bit m of the mask set means AP m is DL)
// and returns the best under `metric`; the lowest mask wins ties.
ScheduleSearchResult exhaustive_schedule(const SchedulingContext& context, SearchMetric metric,
                                         Execution exec = Execution::kParallel,
                                         std::size_t max_aps = kDefaultExhaustiveCap);

Schedule schedule_from_mask(std::uint64_t mask, std::size_t num_aps, const IndexSet& ue_ul,
                            const IndexSet& ue_dl);

// Product of the per-UE surrogate ratios. `clamped` is set when any ratio was
// zero or infinite and had to be clamped.
double product_sinr(const Schedule& schedule, const GreedyObjectiveTerms& terms, bool* clamped);

struct AuditReport {
  std::size_t trials = 0;
  std::size_t evaluated = 0;  // trials without clamping activation
  std::size_t clamped = 0;
  std::size_t submodularity_violations = 0;
  std::size_t monotonicity_violations = 0;
  double worst_relative_violation = 0.0;
};

// Samples nested AP sets A_s in A_t (with modes) and j outside A_t, and checks
// f(A_s + j) - f(A_s) >= f(A_t + j) - f(A_t) and f(A_s + j) >= f(A_s) for the
// product-SINR f. Checks that involve clamped ratios are counted separately
// and never reported as violations.
AuditReport submodularity_audit(const SchedulingContext& context, std::size_t trials, Rng& rng,
                                double rel_tol = 1e-9);

}  // namespace dtdd

#endif  // DTDD_SCHEDULER_HPP_
