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

#include "dtdd/pilots.hpp"

#include <cmath>
#include <string>

namespace dtdd {

void PilotAllocParams::validate() const {
  if (n_iter < 1) throw ConfigError("pilot.n_iter must be >= 1");
  if (std::isnan(alpha_threshold)) throw ConfigError("pilot.alpha_threshold must be a number");
}

PilotAssignment random_assignment(std::size_t num_ues, std::size_t tau_p, Rng& rng) {
  if (tau_p < 1) throw ConfigError("pilot.tau_p must be >= 1");
  if (tau_p >= num_ues) return PilotAssignment(tau_p, iota_set(num_ues));
  std::uniform_int_distribution<std::size_t> pick(0, tau_p - 1);
  std::vector<std::size_t> labels(num_ues);
  for (auto& l : labels) l = pick(rng);
  return PilotAssignment(tau_p, std::move(labels));
}

std::vector<Point2> cell_centers(std::size_t num_cells, double area_side_m) {
  std::size_t side = 1;
  while (side * side < num_cells) ++side;
  if (side * side != num_cells) {
    throw ConfigError("cellular.num_cells must be a perfect square, got " + std::to_string(num_cells));
  }
  return place_aps_grid(num_cells, area_side_m);
}

CellularPilotResult cellular_assignment(const NetworkGeometry& geometry, std::size_t tau_p,
                                        std::size_t num_cells) {
  if (num_cells < 1) throw ConfigError("cellular.num_cells must be >= 1");
  const auto centers = cell_centers(num_cells, geometry.config.area_side_m);

  CellularPilotResult out;
  out.cell_of_ue.resize(geometry.num_ues());
  std::vector<std::size_t> fill(num_cells, 0);
  std::vector<std::size_t> labels(geometry.num_ues());
  for (std::size_t k = 0; k < geometry.num_ues(); ++k) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < num_cells; ++c) {
      const double d = distance(centers[c], geometry.ue_positions[k]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    out.cell_of_ue[k] = best;
    labels[k] = fill[best]++;
  }
  std::size_t largest = 0;
  for (auto f : fill) largest = std::max(largest, f);
  out.effective_tau_p = std::max(tau_p, largest);
  out.assignment = PilotAssignment(out.effective_tau_p, std::move(labels));
  return out;
}

namespace {

struct NearestAlpha {
  std::vector<std::size_t> ap;     // m*_k
  std::vector<double> alpha_sq;  // alpha^2_{m*_k, k}
};

NearestAlpha evaluate_nearest(const NetworkGeometry& geometry, const PilotConfig& pilot,
                              const PilotAssignment& assignment,
                              const std::vector<std::size_t>& nearest) {
  NearestAlpha out;
  out.ap = nearest;
  out.alpha_sq.resize(geometry.num_ues());
  for (std::size_t k = 0; k < geometry.num_ues(); ++k) {
    out.alpha_sq[k] = link_alpha_sq(geometry, pilot, assignment, nearest[k], k);
  }
  return out;
}

std::size_t argmin(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[best]) best = i;
  }
  return best;
}

}  // namespace

double min_nearest_alpha(const NetworkGeometry& geometry, const PilotConfig& pilot,
                         const PilotAssignment& assignment) {
  const auto nearest = nearest_aps(geometry);
  const auto eval = evaluate_nearest(geometry, pilot, assignment, nearest);
  return std::sqrt(eval.alpha_sq[argmin(eval.alpha_sq)]);
}

PilotAllocResult iterative_allocation(const NetworkGeometry& geometry, const PilotConfig& pilot,
                                      const PilotAssignment& initial,
                                      const PilotAllocParams& params) {
  params.validate();
  pilot.validate(geometry.num_ues());
  initial.validate(geometry.num_ues());

  const auto nearest = nearest_aps(geometry);
  PilotAllocResult out;
  out.assignment = initial;

  auto current = evaluate_nearest(geometry, pilot, out.assignment, nearest);
  double min_sq = current.alpha_sq[argmin(current.alpha_sq)];
  out.min_alpha_trace.push_back(std::sqrt(min_sq));

  const double threshold_sq =
      std::isinf(params.alpha_threshold) ? params.alpha_threshold : params.alpha_threshold * params.alpha_threshold;

  out.stop_reason = PilotStopReason::kIterationBudget;
  while (out.iterations < params.n_iter) {
    if (min_sq >= threshold_sq) {
      out.stop_reason = PilotStopReason::kThresholdReached;
      break;
    }
    const std::size_t worst = argmin(current.alpha_sq);
    const std::size_t home = out.assignment.pilot_of(worst);
    const std::size_t ap = nearest[worst];

    // Tentatively place the worst UE on every pilot and keep the best one.
    std::size_t best_pilot = home;
    double best_sq = current.alpha_sq[worst];
    PilotAssignment trial = out.assignment;
    for (std::size_t p = 0; p < out.assignment.num_pilots(); ++p) {
      if (p == home) continue;
      trial.move(worst, p);
      const double a2 = link_alpha_sq(geometry, pilot, trial, ap, worst);
      if (a2 > best_sq) {
        best_sq = a2;
        best_pilot = p;
      }
    }
    if (best_pilot == home) {
      out.stop_reason = PilotStopReason::kNoImprovement;
      break;
    }

    trial.move(worst, best_pilot);
    auto next = evaluate_nearest(geometry, pilot, trial, nearest);
    const double next_min = next.alpha_sq[argmin(next.alpha_sq)];
    if (next_min < min_sq) {
      out.stop_reason = PilotStopReason::kNoImprovement;
      break;
    }
    out.assignment = std::move(trial);
    current = std::move(next);
    min_sq = next_min;
    ++out.iterations;
    out.min_alpha_trace.push_back(std::sqrt(min_sq));
  }
  return out;
}

}  // namespace dtdd
