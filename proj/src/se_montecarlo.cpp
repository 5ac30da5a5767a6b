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

#include "dtdd/se_montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

namespace dtdd {

void McParams::validate() const {
  if (n_realizations < 1) throw ConfigError("mc.n_realizations must be >= 1");
  if (rzf_xi && !(*rzf_xi > 0.0)) throw ConfigError("mc.rzf_xi must be > 0");
}

Rng realization_stream(std::uint64_t seed, std::size_t r) { return make_stream(seed, 2, r); }

ComplexMatrix stack_links(const std::vector<ComplexMatrix>& per_ap, const IndexSet& aps,
                          const IndexSet& ues) {
  if (aps.empty() || ues.empty()) return ComplexMatrix(0, static_cast<Eigen::Index>(ues.size()));
  const Eigen::Index n = per_ap[aps.front()].rows();
  ComplexMatrix out(n * static_cast<Eigen::Index>(aps.size()), static_cast<Eigen::Index>(ues.size()));
  for (std::size_t i = 0; i < aps.size(); ++i) {
    for (std::size_t c = 0; c < ues.size(); ++c) {
      out.block(static_cast<Eigen::Index>(i) * n, static_cast<Eigen::Index>(c), n, 1) =
          per_ap[aps[i]].col(static_cast<Eigen::Index>(ues[c]));
    }
  }
  return out;
}

namespace {

std::vector<double> block_power(const ComplexMatrix& p, std::size_t num_blocks, Eigen::Index n) {
  std::vector<double> power(num_blocks, 0.0);
  for (std::size_t i = 0; i < num_blocks; ++i) {
    power[i] = p.middleRows(static_cast<Eigen::Index>(i) * n, n).squaredNorm();
  }
  return power;
}

}  // namespace

Precoder rzf_precoder(const ChannelRealization& realization, const Schedule& schedule,
                      const PowerConfig& powers, double xi, std::size_t antennas) {
  Precoder out;
  const Eigen::Index n = static_cast<Eigen::Index>(antennas);
  const ComplexMatrix f_hat = stack_links(realization.estimate, schedule.ap_dl, schedule.ue_dl);
  out.ap_power.assign(schedule.ap_dl.size(), 0.0);
  if (f_hat.size() == 0) {
    out.p = f_hat;
    return out;
  }
  // Q^-1 F_hat = F_hat (F_hat^H F_hat + xi I)^-1, which only needs a |U_d|-sized solve.
  ComplexMatrix gram = f_hat.adjoint() * f_hat;
  gram.diagonal().array() += xi;
  const ComplexMatrix raw = gram.llt().solve(f_hat.adjoint()).adjoint();

  const auto raw_power = block_power(raw, schedule.ap_dl.size(), n);
  double kappa_sq = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < schedule.ap_dl.size(); ++i) {
    if (raw_power[i] <= 0.0) continue;
    const double budget = static_cast<double>(antennas) * powers.dl_power[schedule.ap_dl[i]];
    kappa_sq = std::min(kappa_sq, budget / raw_power[i]);
  }
  if (std::isinf(kappa_sq)) kappa_sq = 0.0;
  out.kappa = std::sqrt(kappa_sq);
  out.p = out.kappa * raw;
  for (std::size_t i = 0; i < raw_power.size(); ++i) out.ap_power[i] = kappa_sq * raw_power[i];
  return out;
}

Precoder mfp_precoder(const ChannelRealization& realization, const Schedule& schedule,
                      const PowerConfig& powers, const RealMatrix& kappa, std::size_t antennas) {
  Precoder out;
  out.kappa = 1.0;
  const Eigen::Index n = static_cast<Eigen::Index>(antennas);
  out.p = stack_links(realization.estimate, schedule.ap_dl, schedule.ue_dl);
  for (std::size_t i = 0; i < schedule.ap_dl.size(); ++i) {
    const std::size_t j = schedule.ap_dl[i];
    for (std::size_t c = 0; c < schedule.ue_dl.size(); ++c) {
      out.p.block(static_cast<Eigen::Index>(i) * n, static_cast<Eigen::Index>(c), n, 1) *=
          std::sqrt(powers.dl_power[j]) * kappa(j, schedule.ue_dl[c]);
    }
  }
  out.ap_power = block_power(out.p, schedule.ap_dl.size(), n);
  return out;
}

namespace {

// Per-AP diagonal loading of Q_u: estimation error plus expected inter-AP CLI.
Eigen::VectorXd ul_loading(const Schedule& schedule, const Scenario& scenario,
                           const PowerConfig& powers, const Precoder* dl) {
  const Eigen::Index n = static_cast<Eigen::Index>(scenario.geometry.antennas());
  Eigen::VectorXd load(n * static_cast<Eigen::Index>(schedule.ap_ul.size()));
  for (std::size_t i = 0; i < schedule.ap_ul.size(); ++i) {
    const std::size_t m = schedule.ap_ul[i];
    double r = scenario.geometry.noise();
    for (auto k : schedule.ue_ul) r += powers.ul_power[k] * scenario.stats.alpha_bar_sq(m, k);
    if (dl != nullptr) {
      for (std::size_t d = 0; d < schedule.ap_dl.size(); ++d) {
        r += scenario.geometry.zeta(m, schedule.ap_dl[d]) * dl->ap_power[d];
      }
    }
    load.segment(static_cast<Eigen::Index>(i) * n, n).setConstant(r);
  }
  return load;
}

Eigen::VectorXd ul_powers(const Schedule& schedule, const PowerConfig& powers) {
  Eigen::VectorXd e(static_cast<Eigen::Index>(schedule.ue_ul.size()));
  for (std::size_t c = 0; c < schedule.ue_ul.size(); ++c) e(static_cast<Eigen::Index>(c)) = powers.ul_power[schedule.ue_ul[c]];
  return e;
}

}  // namespace

std::vector<double> mmse_ul_sinr(const ChannelRealization& realization, const Schedule& schedule,
                                 const Scenario& scenario, const PowerConfig& powers,
                                 const Precoder* dl) {
  std::vector<double> sinr(schedule.ue_ul.size(), 0.0);
  if (schedule.ap_ul.empty() || schedule.ue_ul.empty()) return sinr;
  const ComplexMatrix f_hat = stack_links(realization.estimate, schedule.ap_ul, schedule.ue_ul);
  const Eigen::VectorXd e = ul_powers(schedule, powers);
  ComplexMatrix q = f_hat * e.cwiseSqrt().asDiagonal() * (f_hat * e.cwiseSqrt().asDiagonal()).adjoint();
  q.diagonal() += ul_loading(schedule, scenario, powers, dl).cast<Complex>();
  const Eigen::LLT<ComplexMatrix> llt(q);
  const ComplexMatrix x = llt.solve(f_hat);
  for (std::size_t c = 0; c < sinr.size(); ++c) {
    const Eigen::Index i = static_cast<Eigen::Index>(c);
    // a = E_k f^H Q^-1 f and the SINR with Q_{-k} is a / (1 - a).
    const double a = e(i) * f_hat.col(i).dot(x.col(i)).real();
    sinr[c] = a <= 0.0 ? 0.0 : a / std::max(1.0 - a, std::numeric_limits<double>::min());
  }
  return sinr;
}

std::vector<double> mrc_ul_sinr(const ChannelRealization& realization, const Schedule& schedule,
                                const Scenario& scenario, const PowerConfig& powers,
                                const Precoder* dl) {
  std::vector<double> sinr(schedule.ue_ul.size(), 0.0);
  if (schedule.ap_ul.empty() || schedule.ue_ul.empty()) return sinr;
  const ComplexMatrix f_hat = stack_links(realization.estimate, schedule.ap_ul, schedule.ue_ul);
  const Eigen::VectorXd e = ul_powers(schedule, powers);
  const Eigen::VectorXd load = ul_loading(schedule, scenario, powers, dl);
  const ComplexMatrix gram = f_hat.adjoint() * f_hat;  // v_k^H f_k' for v = f_hat
  for (std::size_t c = 0; c < sinr.size(); ++c) {
    const Eigen::Index i = static_cast<Eigen::Index>(c);
    const double signal = e(i) * std::norm(gram(i, i));
    double interference = (f_hat.col(i).cwiseAbs2().array() * load.array()).sum();
    for (Eigen::Index o = 0; o < gram.cols(); ++o) {
      if (o != i) interference += e(o) * std::norm(gram(i, o));
    }
    sinr[c] = signal > 0.0 ? signal / interference : 0.0;
  }
  return sinr;
}

namespace {

// Partial sums of one chunk of realizations.
struct McAccumulator {
  Eigen::VectorXd ul_se;      // sum of log2(1 + eta_u) per UL UE
  ComplexVector b_diag;       // sum of b_nn
  RealMatrix b_sq;            // sum of |b_nn'|^2

  McAccumulator(std::size_t ul, std::size_t dl)
      : ul_se(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ul))),
        b_diag(ComplexVector::Zero(static_cast<Eigen::Index>(dl))),
        b_sq(RealMatrix::Zero(static_cast<Eigen::Index>(dl), static_cast<Eigen::Index>(dl))) {}

  void add(const McAccumulator& o) {
    ul_se += o.ul_se;
    b_diag += o.b_diag;
    b_sq += o.b_sq;
  }
};

McAccumulator run_realizations(const Schedule& schedule, const Scenario& scenario,
                               const PowerConfig& powers, const McParams& params,
                               DlPrecoder kind, bool with_ul, std::uint64_t seed, Execution exec) {
  params.validate();
  const std::size_t n_ul = with_ul ? schedule.ue_ul.size() : 0;
  const std::size_t n_dl = schedule.ap_dl.empty() ? 0 : schedule.ue_dl.size();
  const std::size_t antennas = scenario.geometry.antennas();
  const double xi = params.xi(scenario.geometry.noise());
  const RealMatrix kappa = kind == DlPrecoder::kMfp
                               ? dl_power_coeffs(scenario.stats, schedule, antennas)
                               : RealMatrix();

  const ChunkPlan plan = make_chunk_plan(params.n_realizations);
  std::vector<McAccumulator> partial(plan.num_chunks(), McAccumulator(n_ul, n_dl));
  for_each_index(plan.num_chunks(), exec, [&](std::size_t c) {
    McAccumulator& acc = partial[c];
    for (std::size_t r = plan.begin(c); r < plan.end(c); ++r) {
      Rng rng = realization_stream(seed, r);
      const ChannelRealization block =
          draw_channel_block(scenario.geometry, scenario.pilot, scenario.assignment, scenario.stats, rng);
      Precoder dl;
      const bool has_dl = !schedule.ap_dl.empty() && !schedule.ue_dl.empty();
      if (has_dl) {
        dl = kind == DlPrecoder::kRzf ? rzf_precoder(block, schedule, powers, xi, antennas)
                                      : mfp_precoder(block, schedule, powers, kappa, antennas);
        const ComplexMatrix f = stack_links(block.channel, schedule.ap_dl, schedule.ue_dl);
        const ComplexMatrix b = f.adjoint() * dl.p;  // b(n, n') = f_n^H p_n'
        acc.b_diag += b.diagonal();
        acc.b_sq += b.cwiseAbs2();
      }
      if (n_ul > 0) {
        const auto eta = mmse_ul_sinr(block, schedule, scenario, powers, has_dl ? &dl : nullptr);
        for (std::size_t i = 0; i < n_ul; ++i) acc.ul_se(static_cast<Eigen::Index>(i)) += std::log2(1.0 + eta[i]);
      }
    }
  });
  McAccumulator total(n_ul, n_dl);
  for (const auto& p : partial) total.add(p);
  return total;
}

std::vector<double> dl_from_moments(const McAccumulator& acc, const Schedule& schedule,
                                    const Scenario& scenario, const PowerConfig& powers,
                                    std::size_t realizations) {
  std::vector<double> sinr(scenario.num_ues(), 0.0);
  if (acc.b_diag.size() == 0) return sinr;
  const double inv_r = 1.0 / static_cast<double>(realizations);
  for (std::size_t i = 0; i < schedule.ue_dl.size(); ++i) {
    const Eigen::Index ii = static_cast<Eigen::Index>(i);
    const std::size_t n = schedule.ue_dl[i];
    const double mean_sq = std::norm(acc.b_diag(ii) * inv_r);
    double denom = scenario.geometry.noise();
    for (Eigen::Index o = 0; o < acc.b_sq.cols(); ++o) denom += acc.b_sq(ii, o) * inv_r;
    denom -= mean_sq;  // E|b_nn|^2 - |E b_nn|^2 is the beamforming uncertainty
    for (auto k : schedule.ue_ul) denom += powers.ul_power[k] * scenario.geometry.epsilon(n, k);
    sinr[n] = mean_sq > 0.0 ? mean_sq / denom : 0.0;
  }
  return sinr;
}

}  // namespace

std::vector<double> dl_sinr_monte_carlo(const Schedule& schedule, const Scenario& scenario,
                                        const PowerConfig& powers, const McParams& params,
                                        DlPrecoder precoder, std::uint64_t seed, Execution exec) {
  const McAccumulator acc =
      run_realizations(schedule, scenario, powers, params, precoder, false, seed, exec);
  return dl_from_moments(acc, schedule, scenario, powers, params.n_realizations);
}

SEReport mc_sum_se(const Schedule& schedule, const Scenario& scenario, const PowerConfig& powers,
                   const McParams& params, std::uint64_t seed, Execution exec) {
  const McAccumulator acc =
      run_realizations(schedule, scenario, powers, params, DlPrecoder::kRzf, true, seed, exec);
  const std::size_t num_ues = scenario.num_ues();
  const double inv_r = 1.0 / static_cast<double>(params.n_realizations);

  // The UL expectation sits outside the log, so report the SINR whose
  // log2(1 + .) equals the averaged SE.
  std::vector<double> ul(num_ues, 0.0);
  for (std::size_t i = 0; i < static_cast<std::size_t>(acc.ul_se.size()); ++i) {
    ul[schedule.ue_ul[i]] = std::exp2(acc.ul_se(static_cast<Eigen::Index>(i)) * inv_r) - 1.0;
  }
  std::vector<double> dl = dl_from_moments(acc, schedule, scenario, powers, params.n_realizations);
  SEReport report = compose_report(std::move(ul), std::move(dl), scenario.prelog());
  // Keep the averaged UL SE exactly rather than the round trip through exp2/log2.
  double ul_total = 0.0;
  for (std::size_t i = 0; i < static_cast<std::size_t>(acc.ul_se.size()); ++i) {
    const double se = acc.ul_se(static_cast<Eigen::Index>(i)) * inv_r;
    report.ul_se[schedule.ue_ul[i]] = se;
    ul_total += se;
  }
  report.ul_sum_se = report.prelog * ul_total;
  report.sum_se = report.ul_sum_se + report.dl_sum_se;
  return report;
}

}  // namespace dtdd
