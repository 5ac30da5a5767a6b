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

#ifndef DTDD_FD_CELLULAR_HPP_
#define DTDD_FD_CELLULAR_HPP_

#include <cstddef>
#include <vector>

#include "dtdd/geometry.hpp"
#include "dtdd/se_closed_form.hpp"

namespace dtdd {

// Co-located massive MIMO base stations, one per square cell. UEs attach to
// the nearest BS; the i-th UE of every cell uses pilot i.
struct CellularLayout {
  std::size_t antennas = 0;  // N_t = N_r
  double noise_power = 1.0;
  std::vector<Point2> bs_positions;
  std::vector<std::size_t> cell_of_ue;
  std::vector<std::size_t> pilot_of_ue;
  std::size_t tau_p = 0;  // largest cell population
  RealMatrix beta;        // L x K
  RealMatrix rho;         // L x L inter-BS residual, zero diagonal
  RealMatrix epsilon;     // K x K, shared with the cell-free drop

  std::size_t num_cells() const { return bs_positions.size(); }
  std::size_t num_ues() const { return cell_of_ue.size(); }
};

// Reuses the UE positions of a cell-free drop so both systems see the same
// users. `cli_residual_db` scales the inter-BS pathloss (-inf disables it).
CellularLayout build_cellular_layout(const NetworkGeometry& drop, std::size_t num_cells,
                                     std::size_t antennas, double cli_residual_db);

struct CellularPowers {
  std::vector<double> pilot_power;  // per UE
  std::vector<double> ul_power;     // per UE
  std::vector<double> dl_power;     // per BS
};

// sigma^2_{l,u}: estimate variance at BS l of UE u, L x K.
RealMatrix cellular_sigma_sq(const CellularLayout& layout, const CellularPowers& powers);

// Full-duplex cellular SINRs with MRC/MFP and perfect self-interference
// cancellation. UEs in ue_ul transmit, UEs in ue_dl receive, simultaneously.
// `tau` sets the prelog together with layout.tau_p.
SEReport fd_cellular_sum_se(const CellularLayout& layout, const CellularPowers& powers,
                            const IndexSet& ue_ul, const IndexSet& ue_dl, std::size_t tau);

// Half-duplex cellular TDD: the UL and DL phases are evaluated separately and
// time-shared with weights ul_weight and 1 - ul_weight.
SEReport cellular_tdd_sum_se(const CellularLayout& layout, const CellularPowers& powers,
                             const IndexSet& ue_ul, const IndexSet& ue_dl, std::size_t tau,
                             double ul_weight);

}  // namespace dtdd

#endif  // DTDD_FD_CELLULAR_HPP_
