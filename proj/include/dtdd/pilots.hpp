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

#ifndef DTDD_PILOTS_HPP_
#define DTDD_PILOTS_HPP_

#include <cstddef>
#include <limits>
#include <vector>

#include "dtdd/estimation.hpp"
#include "dtdd/geometry.hpp"

namespace dtdd {

struct PilotAllocParams {
  std::size_t n_iter = 1000;
  // Stop once the worst nearest-AP alpha exceeds this value. Disabled by default.
  double alpha_threshold = std::numeric_limits<double>::infinity();

  void validate() const;
};

// Uniformly random pilot per UE. With tau_p >= K the orthogonal assignment
// (UE k on pilot k) is returned instead.
PilotAssignment random_assignment(std::size_t num_ues, std::size_t tau_p, Rng& rng);

struct CellularPilotResult {
  PilotAssignment assignment;
  // Raised to the largest cluster when a cell holds more than tau_p UEs.
  std::size_t effective_tau_p = 0;
  std::vector<std::size_t> cell_of_ue;
};

// Centres of `num_cells` equal square cells tiling the area (num_cells must
// be a perfect square), row-major from the bottom-left.
std::vector<Point2> cell_centers(std::size_t num_cells, double area_side_m);

// Clusters UEs by nearest cell centre and hands out pilots round-robin inside
// each cluster, so no two UEs of the same cell share a pilot.
CellularPilotResult cellular_assignment(const NetworkGeometry& geometry, std::size_t tau_p,
                                        std::size_t num_cells);

enum class PilotStopReason { kIterationBudget, kThresholdReached, kNoImprovement };

struct PilotAllocResult {
  PilotAssignment assignment;
  // min_k alpha_{m*_k, k} before any move, then after every accepted move.
  std::vector<double> min_alpha_trace;
  std::size_t iterations = 0;
  PilotStopReason stop_reason = PilotStopReason::kNoImprovement;

  double initial_min_alpha() const { return min_alpha_trace.front(); }
  double final_min_alpha() const { return min_alpha_trace.back(); }
};

// Iterative worst-UE reassignment: repeatedly take the UE whose estimate at
// its nearest AP is worst and move it to the pilot that maximises that
// estimate quality. A move is accepted only if it strictly improves that UE
// and does not lower the network-wide minimum.
PilotAllocResult iterative_allocation(const NetworkGeometry& geometry, const PilotConfig& pilot,
                                      const PilotAssignment& initial,
                                      const PilotAllocParams& params = {});

// min_k alpha_{m*_k, k} (amplitude, not variance).
double min_nearest_alpha(const NetworkGeometry& geometry, const PilotConfig& pilot,
                         const PilotAssignment& assignment);

}  // namespace dtdd

#endif  // DTDD_PILOTS_HPP_
