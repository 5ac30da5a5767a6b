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

#ifndef DTDD_SE_CLOSED_FORM_HPP_
#define DTDD_SE_CLOSED_FORM_HPP_

#include <cstddef>
#include <vector>

#include "dtdd/estimation.hpp"
#include "dtdd/geometry.hpp"
#include "dtdd/types.hpp"

namespace dtdd {

// AP mode split plus the UE demand split of one slot.
struct Schedule {
  IndexSet ap_ul;
  IndexSet ap_dl;
  IndexSet ue_ul;
  IndexSet ue_dl;

  // Throws ConfigError unless the AP sets are disjoint subsets of [0, M) and
  // the UE sets partition [0, K).
  void validate(std::size_t num_aps, std::size_t num_ues) const;

  // One mode label per AP: 'U', 'D' or '-' for unscheduled.
  std::vector<char> ap_modes(std::size_t num_aps) const;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

// UEs [0, num_ul) demand UL, the rest DL.
void split_demand(Schedule& schedule, std::size_t num_ues, std::size_t num_ul);

struct PowerConfig {
  std::vector<double> ul_power;  // E_u,k per UE (only UL UEs matter)
  std::vector<double> dl_power;  // E_d,j per AP (only DL APs matter)

  void validate(std::size_t num_aps, std::size_t num_ues) const;

  static PowerConfig uniform(std::size_t num_aps, std::size_t num_ues, double ul, double dl);
};

// Everything that stays fixed while the AP schedule changes.
struct Scenario {
  NetworkGeometry geometry;
  PilotConfig pilot;
  PilotAssignment assignment;
  EstimationStats stats;
  std::vector<IndexSet> copilots;  // per UE: other UEs on the same pilot

  static Scenario make(NetworkGeometry geometry, PilotConfig pilot, PilotAssignment assignment);

  std::size_t num_aps() const { return geometry.num_aps(); }
  std::size_t num_ues() const { return geometry.num_ues(); }
  double prelog() const;
};

struct SEReport {
  // Indexed by UE; zero for UEs outside the respective direction.
  std::vector<double> ul_sinr;
  std::vector<double> dl_sinr;
  std::vector<double> ul_se;
  std::vector<double> dl_se;
  double prelog = 0.0;
  double ul_sum_se = 0.0;  // prelog-scaled
  double dl_sum_se = 0.0;  // prelog-scaled
  double sum_se = 0.0;

  friend bool operator==(const SEReport&, const SEReport&) = default;
};

// Fills per-UE SEs and sums from the SINR vectors.
SEReport compose_report(std::vector<double> ul_sinr, std::vector<double> dl_sinr, double prelog);

// kappa_jn = (N sum_{k in U_d} alpha^2_jk)^-1 for j in A_d, n in U_d; zero
// elsewhere (including DL APs whose sum vanishes).
RealMatrix dl_power_coeffs(const EstimationStats& stats, const Schedule& schedule,
                           std::size_t antennas);

// Per-term breakdown of a closed-form SINR, exposed for validation.
struct SinrTerms {
  double signal = 0.0;
  double noncoherent = 0.0;
  double coherent = 0.0;
  double cross_link = 0.0;  // inter-AP for UL, UE-UE for DL
  double noise = 0.0;

  double sinr() const;
};

// MRC uplink SINR of UL UE k. Zero when A_u is empty.
SinrTerms ul_terms_mrc(std::size_t k, const Schedule& schedule, const Scenario& scenario,
                       const PowerConfig& powers, const RealMatrix& kappa);
double ul_sinr_mrc(std::size_t k, const Schedule& schedule, const Scenario& scenario,
                   const PowerConfig& powers, const RealMatrix& kappa);

// MFP downlink SINR of DL UE n. Zero when A_d is empty.
SinrTerms dl_terms_mfp(std::size_t n, const Schedule& schedule, const Scenario& scenario,
                       const PowerConfig& powers, const RealMatrix& kappa);
double dl_sinr_mfp(std::size_t n, const Schedule& schedule, const Scenario& scenario,
                   const PowerConfig& powers, const RealMatrix& kappa);

// Closed-form MRC/MFP sum SE of a schedule; computes kappa internally.
SEReport sum_se(const Schedule& schedule, const Scenario& scenario, const PowerConfig& powers);

}  // namespace dtdd

#endif  // DTDD_SE_CLOSED_FORM_HPP_
