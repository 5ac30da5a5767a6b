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

#ifndef DTDD_GEOMETRY_HPP_
#define DTDD_GEOMETRY_HPP_

#include <cstddef>
#include <limits>
#include <vector>

#include "dtdd/types.hpp"

namespace dtdd {

struct NetworkConfig {
  double area_side_m = 1000.0;
  std::size_t num_aps = 16;
  std::size_t antennas_per_ap = 4;
  std::size_t num_ues = 16;
  double pathloss_exponent = -3.76;
  double reference_distance_m = 10.0;
  double noise_power = 1.0;
  // Residual inter-AP suppression applied on top of the inter-AP pathloss.
  // -infinity disables AP-to-AP interference entirely.
  double cli_residual_db = 0.0;

  // Throws ConfigError naming the first invalid field.
  void validate() const;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

// Large-scale description of one network drop. Immutable after construction.
struct NetworkGeometry {
  NetworkConfig config;
  std::vector<Point2> ap_positions;
  std::vector<Point2> ue_positions;
  RealMatrix beta;     // M x K, AP-UE large-scale gain
  RealMatrix zeta;     // M x M, residual AP-AP interference variance
  RealMatrix epsilon;  // K x K, UE-UE interference variance

  std::size_t num_aps() const { return ap_positions.size(); }
  std::size_t num_ues() const { return ue_positions.size(); }
  std::size_t antennas() const { return config.antennas_per_ap; }
  double noise() const { return config.noise_power; }
};

// Cell-centred ceil(sqrt(M)) x ceil(sqrt(M)) grid, row-major from the
// bottom-left corner, truncated to M points.
std::vector<Point2> place_aps_grid(std::size_t num_aps, double area_side_m);

std::vector<Point2> drop_ues(std::size_t num_ues, double area_side_m, Rng& rng);

// (max(d, d_ref) / d_ref)^exponent
double pathloss(double distance_m, const NetworkConfig& config);

NetworkGeometry build_geometry(const NetworkConfig& config, Rng& rng);

// Same as build_geometry but with explicit node positions (fixtures, paired
// comparisons). config.num_aps / num_ues are overwritten by the list sizes.
NetworkGeometry geometry_from_positions(NetworkConfig config, std::vector<Point2> aps,
                                        std::vector<Point2> ues);

// Index of the closest AP for every UE (lowest index on ties).
std::vector<std::size_t> nearest_aps(const NetworkGeometry& geometry);

}  // namespace dtdd

#endif  // DTDD_GEOMETRY_HPP_
