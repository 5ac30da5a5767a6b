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

#ifndef DTDD_SE_MONTECARLO_HPP_
#define DTDD_SE_MONTECARLO_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dtdd/estimation.hpp"
#include "dtdd/parallel.hpp"
#include "dtdd/se_closed_form.hpp"

namespace dtdd {

struct McParams {
  std::size_t n_realizations = 200;
  // RZF regularisation; the noise power when unset.
  std::optional<double> rzf_xi;

  void validate() const;
  double xi(double noise_power) const { return rzf_xi.value_or(noise_power); }

  friend bool operator==(const McParams&, const McParams&) = default;
};

enum class DlPrecoder { kRzf, kMfp };

// Columns `ues` of the per-AP matrices, stacked over `aps` (block i holds AP aps[i]).
ComplexMatrix stack_links(const std::vector<ComplexMatrix>& per_ap, const IndexSet& aps,
                          const IndexSet& ues);

// Stacked DL precoder over the DL APs; column i serves ue_dl[i]. The symbol
// power is folded in, so AP j radiates tr(P_j P_j^H).
struct Precoder {
  ComplexMatrix p;
  double kappa = 0.0;             // common RZF scaling (1 for MFP)
  std::vector<double> ap_power;   // tr(P_j P_j^H), in ap_dl order
};

// P = kappa Q^-1 F_hat with Q = F_hat F_hat^H + xi I and
// kappa^2 = min_j N E_d,j / tr(P~_j P~_j^H), so the binding AP meets its
// per-antenna budget exactly.
Precoder rzf_precoder(const ChannelRealization& realization, const Schedule& schedule,
                      const PowerConfig& powers, double xi, std::size_t antennas);

// Matched filter with the closed-form power coefficients: p_jn = sqrt(E_d,j) kappa_jn f_hat_jn.
Precoder mfp_precoder(const ChannelRealization& realization, const Schedule& schedule,
                      const PowerConfig& powers, const RealMatrix& kappa, std::size_t antennas);

// Instantaneous centralised UL SINRs (in ue_ul order) for the combiner
// V = Q_u^-1 F_hat_u. Q_u includes the estimation-error covariance and the
// block-diagonal expected inter-AP interference of `dl` (nullptr: no DL).
std::vector<double> mmse_ul_sinr(const ChannelRealization& realization, const Schedule& schedule,
                                 const Scenario& scenario, const PowerConfig& powers,
                                 const Precoder* dl);

// Same covariance model with the MRC combiner V = F_hat_u.
std::vector<double> mrc_ul_sinr(const ChannelRealization& realization, const Schedule& schedule,
                                const Scenario& scenario, const PowerConfig& powers,
                                const Precoder* dl);

// Per-drop Monte-Carlo DL SINRs (indexed by UE) using the use-and-then-forget
// bound; expectations over `params.n_realizations` channel blocks. The UE-UE
// term is the closed form sum_k E_u,k eps_nk.
std::vector<double> dl_sinr_monte_carlo(const Schedule& schedule, const Scenario& scenario,
                                        const PowerConfig& powers, const McParams& params,
                                        DlPrecoder precoder, std::uint64_t seed,
                                        Execution exec = Execution::kParallel);

inline std::vector<double> rzf_dl_sinr(const Schedule& schedule, const Scenario& scenario,
                                       const PowerConfig& powers, const McParams& params,
                                       std::uint64_t seed, Execution exec = Execution::kParallel) {
  return dl_sinr_monte_carlo(schedule, scenario, powers, params, DlPrecoder::kRzf, seed, exec);
}

// MMSE/RZF sum SE: UL SE averages log2(1 + SINR) over realizations, DL SE is
// log2(1 + bound SINR). Realization r draws from make_stream(seed, 2, r), so
// the result does not depend on `exec` or the thread count.
SEReport mc_sum_se(const Schedule& schedule, const Scenario& scenario, const PowerConfig& powers,
                   const McParams& params, std::uint64_t seed, Execution exec = Execution::kParallel);

// Stream for realization r of a Monte-Carlo run seeded with `seed`.
Rng realization_stream(std::uint64_t seed, std::size_t r);

}  // namespace dtdd

#endif  // DTDD_SE_MONTECARLO_HPP_
