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

#include "dtdd/fd_cellular.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dtdd/pilots.hpp"

namespace dtdd {

CellularLayout build_cellular_layout(const NetworkGeometry& drop, std::size_t num_cells,
                                     std::size_t antennas, double cli_residual_db) {
  if (antennas < 1) throw ConfigError("cellular.antennas must be >= 1");
  CellularLayout layout;
  layout.antennas = antennas;
  layout.noise_power = drop.noise();
  layout.bs_positions = cell_centers(num_cells, drop.config.area_side_m);

  const auto clusters = cellular_assignment(drop, 1, num_cells);
  layout.cell_of_ue = clusters.cell_of_ue;
  layout.pilot_of_ue = clusters.assignment.labels();
  layout.tau_p = clusters.effective_tau_p;

  const std::size_t num_ues = drop.num_ues();
  layout.beta.resize(num_cells, num_ues);
  for (std::size_t l = 0; l < num_cells; ++l) {
    for (std::size_t k = 0; k < num_ues; ++k) {
      layout.beta(l, k) = pathloss(distance(layout.bs_positions[l], drop.ue_positions[k]), drop.config);
    }
  }
  layout.rho = RealMatrix::Zero(num_cells, num_cells);
  const bool cli_on = !(std::isinf(cli_residual_db) && cli_residual_db < 0);
  if (cli_on) {
    const double residual = db_to_linear(cli_residual_db);
    for (std::size_t l = 0; l < num_cells; ++l) {
      for (std::size_t j = 0; j < num_cells; ++j) {
        if (l == j) continue;
        layout.rho(l, j) =
            pathloss(distance(layout.bs_positions[l], layout.bs_positions[j]), drop.config) * residual;
      }
    }
  }
  layout.epsilon = drop.epsilon;
  return layout;
}

RealMatrix cellular_sigma_sq(const CellularLayout& layout, const CellularPowers& powers) {
  const std::size_t num_cells = layout.num_cells();
  const std::size_t num_ues = layout.num_ues();
  const double tau_p = static_cast<double>(layout.tau_p);
  RealMatrix sigma(num_cells, num_ues);
  for (std::size_t l = 0; l < num_cells; ++l) {
    std::vector<double> load(layout.tau_p, 0.0);
    for (std::size_t u = 0; u < num_ues; ++u) {
      load[layout.pilot_of_ue[u]] += powers.pilot_power[u] * layout.beta(l, u);
    }
    for (std::size_t u = 0; u < num_ues; ++u) {
      const double b = layout.beta(l, u);
      sigma(l, u) = tau_p * powers.pilot_power[u] * b * b /
                    (tau_p * load[layout.pilot_of_ue[u]] + layout.noise_power);
    }
  }
  return sigma;
}

SEReport fd_cellular_sum_se(const CellularLayout& layout, const CellularPowers& powers,
                            const IndexSet& ue_ul, const IndexSet& ue_dl, std::size_t tau) {
  const std::size_t num_cells = layout.num_cells();
  const std::size_t num_ues = layout.num_ues();
  if (powers.pilot_power.size() != num_ues || powers.ul_power.size() != num_ues) {
    throw ConfigError("cellular: per-UE power vectors must have " + std::to_string(num_ues) + " entries");
  }
  if (powers.dl_power.size() != num_cells) {
    throw ConfigError("cellular: dl_power must have one entry per cell");
  }
  if (tau < layout.tau_p) {
    throw ConfigError("pilot.tau must be >= the cellular pilot length " + std::to_string(layout.tau_p));
  }
  const double n_ant = static_cast<double>(layout.antennas);
  const RealMatrix sigma = cellular_sigma_sq(layout, powers);
  const auto& cell = layout.cell_of_ue;
  const auto& pilot = layout.pilot_of_ue;

  // kappa_ln = (N_t sum_{DL UEs of cell l} sigma^2_{l,n})^-1.
  std::vector<double> kappa(num_cells, 0.0);
  {
    std::vector<double> load(num_cells, 0.0);
    for (auto n : ue_dl) load[cell[n]] += sigma(cell[n], n);
    for (std::size_t l = 0; l < num_cells; ++l) {
      if (load[l] > 0.0) kappa[l] = 1.0 / (n_ant * load[l]);
    }
  }
  // E_d,j kappa_j^2 sum_{n in DL_j} sigma^2_{j,n}: MFP power radiated by BS j.
  std::vector<double> radiated(num_cells, 0.0);
  for (auto n : ue_dl) {
    const std::size_t j = cell[n];
    radiated[j] += powers.dl_power[j] * kappa[j] * kappa[j] * sigma(j, n);
  }

  std::vector<double> ul(num_ues, 0.0);
  std::vector<double> dl(num_ues, 0.0);
  for (auto u : ue_ul) {
    const std::size_t l = cell[u];
    const double signal = n_ant * sigma(l, u) * powers.ul_power[u];
    double ibs = 0.0;
    for (std::size_t j = 0; j < num_cells; ++j) {
      if (j != l) ibs += n_ant * layout.rho(l, j) * radiated[j];
    }
    double mui = 0.0;
    for (auto v : ue_ul) {
      mui += layout.beta(l, v) * powers.ul_power[v];
      if (v != u && pilot[v] == pilot[u] && cell[v] != l) mui += n_ant * sigma(l, v) * powers.ul_power[v];
    }
    ul[u] = signal / (ibs + mui + layout.noise_power);
  }
  for (auto n : ue_dl) {
    const std::size_t l = cell[n];
    const double signal = n_ant * n_ant * kappa[l] * kappa[l] * powers.dl_power[l] * sigma(l, n) * sigma(l, n);
    double iui = 0.0;
    for (auto v : ue_ul) iui += powers.ul_power[v] * layout.epsilon(n, v);
    double mui = 0.0;
    for (auto q : ue_dl) {
      const std::size_t j = cell[q];
      const double w = powers.dl_power[j] * kappa[j] * kappa[j];
      mui += n_ant * layout.beta(j, n) * sigma(j, q) * w;
      if (q != n && pilot[q] == pilot[n] && j != l) mui += n_ant * n_ant * sigma(j, n) * sigma(j, q) * w;
    }
    dl[n] = signal / (iui + mui + layout.noise_power);
  }
  const double prelog = static_cast<double>(tau - layout.tau_p) / static_cast<double>(tau);
  return compose_report(std::move(ul), std::move(dl), prelog);
}

SEReport cellular_tdd_sum_se(const CellularLayout& layout, const CellularPowers& powers,
                             const IndexSet& ue_ul, const IndexSet& ue_dl, std::size_t tau,
                             double ul_weight) {
  if (!(ul_weight >= 0.0 && ul_weight <= 1.0)) throw ConfigError("tdd.ul_weight must lie in [0, 1]");
  const SEReport up = fd_cellular_sum_se(layout, powers, ue_ul, {}, tau);
  const SEReport down = fd_cellular_sum_se(layout, powers, {}, ue_dl, tau);
  SEReport r = compose_report(up.ul_sinr, down.dl_sinr, up.prelog);
  r.ul_sum_se = ul_weight * up.ul_sum_se;
  r.dl_sum_se = (1.0 - ul_weight) * down.dl_sum_se;
  r.sum_se = r.ul_sum_se + r.dl_sum_se;
  return r;
}

}  // namespace dtdd
