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

#include "dtdd/geometry.hpp"

#include <cmath>
#include <string>

namespace dtdd {

void NetworkConfig::validate() const {
  if (num_aps < 1) throw ConfigError("network.num_aps must be >= 1");
  if (antennas_per_ap < 1) throw ConfigError("network.antennas_per_ap must be >= 1");
  if (num_ues < 1) throw ConfigError("network.num_ues must be >= 1");
  if (!(area_side_m > 0.0) || !std::isfinite(area_side_m)) {
    throw ConfigError("network.area_side_m must be > 0");
  }
  if (!(reference_distance_m > 0.0)) throw ConfigError("network.reference_distance_m must be > 0");
  if (!(noise_power >= 0.0)) throw ConfigError("network.noise_power must be >= 0");
  if (!std::isfinite(pathloss_exponent)) throw ConfigError("network.pathloss_exponent must be finite");
  if (std::isnan(cli_residual_db) || cli_residual_db == std::numeric_limits<double>::infinity()) {
    throw ConfigError("network.cli_residual_db must be a number or -inf");
  }
}

std::vector<Point2> place_aps_grid(std::size_t num_aps, double area_side_m) {
  std::size_t side = 1;
  while (side * side < num_aps) ++side;
  const double spacing = area_side_m / static_cast<double>(side);
  std::vector<Point2> out;
  out.reserve(num_aps);
  for (std::size_t i = 0; i < num_aps; ++i) {
    const std::size_t row = i / side;
    const std::size_t col = i % side;
    out.push_back({(static_cast<double>(col) + 0.5) * spacing, (static_cast<double>(row) + 0.5) * spacing});
  }
  return out;
}

std::vector<Point2> drop_ues(std::size_t num_ues, double area_side_m, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, area_side_m);
  std::vector<Point2> out(num_ues);
  for (auto& p : out) {
    p.x = uniform(rng);
    p.y = uniform(rng);
  }
  return out;
}

double pathloss(double distance_m, const NetworkConfig& config) {
  const double d = std::max(distance_m, config.reference_distance_m);
  return std::pow(d / config.reference_distance_m, config.pathloss_exponent);
}

NetworkGeometry build_geometry(const NetworkConfig& config, Rng& rng) {
  config.validate();
  auto aps = place_aps_grid(config.num_aps, config.area_side_m);
  auto ues = drop_ues(config.num_ues, config.area_side_m, rng);
  return geometry_from_positions(config, std::move(aps), std::move(ues));
}

NetworkGeometry geometry_from_positions(NetworkConfig config, std::vector<Point2> aps,
                                        std::vector<Point2> ues) {
  config.num_aps = aps.size();
  config.num_ues = ues.size();
  config.validate();

  NetworkGeometry g;
  g.config = config;
  g.ap_positions = std::move(aps);
  g.ue_positions = std::move(ues);
  const std::size_t m_count = g.ap_positions.size();
  const std::size_t k_count = g.ue_positions.size();

  g.beta.resize(m_count, k_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    for (std::size_t k = 0; k < k_count; ++k) {
      g.beta(m, k) = pathloss(distance(g.ap_positions[m], g.ue_positions[k]), config);
    }
  }

  const bool cli_disabled = std::isinf(config.cli_residual_db);
  const double suppression = cli_disabled ? 0.0 : db_to_linear(config.cli_residual_db);
  g.zeta = RealMatrix::Zero(m_count, m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    for (std::size_t j = m + 1; j < m_count; ++j) {
      const double v = pathloss(distance(g.ap_positions[m], g.ap_positions[j]), config) * suppression;
      g.zeta(m, j) = v;
      g.zeta(j, m) = v;
    }
  }

  g.epsilon = RealMatrix::Zero(k_count, k_count);
  for (std::size_t n = 0; n < k_count; ++n) {
    for (std::size_t k = n + 1; k < k_count; ++k) {
      const double v = pathloss(distance(g.ue_positions[n], g.ue_positions[k]), config);
      g.epsilon(n, k) = v;
      g.epsilon(k, n) = v;
    }
  }
  return g;
}

std::vector<std::size_t> nearest_aps(const NetworkGeometry& geometry) {
  std::vector<std::size_t> out(geometry.num_ues(), 0);
  for (std::size_t k = 0; k < geometry.num_ues(); ++k) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < geometry.num_aps(); ++m) {
      const double d = distance(geometry.ap_positions[m], geometry.ue_positions[k]);
      if (d < best) {
        best = d;
        out[k] = m;
      }
    }
  }
  return out;
}

}  // namespace dtdd
