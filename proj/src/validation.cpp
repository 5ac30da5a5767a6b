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

#include "dtdd/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dtdd/pilots.hpp"
#include "dtdd/se_montecarlo.hpp"

namespace dtdd {
namespace {

struct Moments {
  // UL, per UL UE i (ue_ul order): g(i, o) = sum_m f_hat_mk^H f_mo over UL UEs o.
  ComplexMatrix g_sum;
  RealMatrix g_sq;
  Eigen::VectorXd est_norm;   // sum ||f_hat_k||^2 over A_u
  Eigen::VectorXd cross_ap;   // AP-AP interference power at the combiner output
  // DL, per DL UE i: a(i, o) = received coefficient of stream o at UE i.
  ComplexMatrix a_sum;
  RealMatrix a_sq;
  Eigen::VectorXd cross_ue;   // UE-UE interference power

  Moments(Eigen::Index u, Eigen::Index d)
      : g_sum(ComplexMatrix::Zero(u, u)), g_sq(RealMatrix::Zero(u, u)),
        est_norm(Eigen::VectorXd::Zero(u)), cross_ap(Eigen::VectorXd::Zero(u)),
        a_sum(ComplexMatrix::Zero(d, d)), a_sq(RealMatrix::Zero(d, d)),
        cross_ue(Eigen::VectorXd::Zero(d)) {}

  void add(const Moments& o) {
    g_sum += o.g_sum;
    g_sq += o.g_sq;
    est_norm += o.est_norm;
    cross_ap += o.cross_ap;
    a_sum += o.a_sum;
    a_sq += o.a_sq;
    cross_ue += o.cross_ue;
  }
};

}  // namespace

SignalLevelEstimate signal_level_mrc_mfp(const Schedule& schedule, const Scenario& scenario,
                                         const PowerConfig& powers, std::size_t realizations,
                                         std::uint64_t seed, Execution exec) {
  if (realizations < 1) throw ConfigError("validation needs at least one realization");
  schedule.validate(scenario.num_aps(), scenario.num_ues());
  const std::size_t antennas = scenario.geometry.antennas();
  const Eigen::Index n_ant = static_cast<Eigen::Index>(antennas);
  const RealMatrix kappa = dl_power_coeffs(scenario.stats, schedule, antennas);
  const Eigen::Index nu = static_cast<Eigen::Index>(schedule.ue_ul.size());
  const Eigen::Index nd = static_cast<Eigen::Index>(schedule.ue_dl.size());
  const bool any_cli = !schedule.ap_ul.empty() && !schedule.ap_dl.empty();
  const DrawOptions options{any_cli, nu > 0 && nd > 0};

  const ChunkPlan plan = make_chunk_plan(realizations);
  std::vector<Moments> partial(plan.num_chunks(), Moments(nu, nd));
  for_each_index(plan.num_chunks(), exec, [&](std::size_t c) {
    Moments& acc = partial[c];
    for (std::size_t r = plan.begin(c); r < plan.end(c); ++r) {
      Rng rng = realization_stream(seed, r);
      const ChannelRealization block = draw_channel_block(
          scenario.geometry, scenario.pilot, scenario.assignment, scenario.stats, rng, options);
      // Transmit vectors of the DL APs: x_j = sum_q sqrt(E_d,j) kappa_jq f_hat_jq s_q.
      const Precoder dl = mfp_precoder(block, schedule, powers, kappa, antennas);

      if (!schedule.ap_ul.empty() && nu > 0) {
        const ComplexMatrix f_hat = stack_links(block.estimate, schedule.ap_ul, schedule.ue_ul);
        const ComplexMatrix f = stack_links(block.channel, schedule.ap_ul, schedule.ue_ul);
        const ComplexMatrix g = f_hat.adjoint() * f;
        acc.g_sum += g;
        acc.g_sq += g.cwiseAbs2();
        acc.est_norm += f_hat.colwise().squaredNorm().transpose();
        if (any_cli && nd > 0) {
          // Received AP-AP interference per stream q, stacked over UL APs.
          ComplexMatrix leak = ComplexMatrix::Zero(f_hat.rows(), nd);
          for (std::size_t i = 0; i < schedule.ap_ul.size(); ++i) {
            for (std::size_t d = 0; d < schedule.ap_dl.size(); ++d) {
              const ComplexMatrix& gmj = block.inter_ap_block(schedule.ap_ul[i], schedule.ap_dl[d]);
              leak.middleRows(static_cast<Eigen::Index>(i) * n_ant, n_ant) +=
                  gmj * dl.p.middleRows(static_cast<Eigen::Index>(d) * n_ant, n_ant);
            }
          }
          acc.cross_ap += (f_hat.adjoint() * leak).cwiseAbs2().rowwise().sum();
        }
      }
      if (!schedule.ap_dl.empty() && nd > 0) {
        const ComplexMatrix f = stack_links(block.channel, schedule.ap_dl, schedule.ue_dl);
        const ComplexMatrix a = f.adjoint() * dl.p;
        acc.a_sum += a;
        acc.a_sq += a.cwiseAbs2();
        if (options.ue_ue) {
          for (Eigen::Index i = 0; i < nd; ++i) {
            double p = 0.0;
            for (auto k : schedule.ue_ul) {
              p += powers.ul_power[k] * std::norm(block.ue_ue(static_cast<Eigen::Index>(schedule.ue_dl[i]),
                                                              static_cast<Eigen::Index>(k)));
            }
            acc.cross_ue(i) += p;
          }
        }
      }
    }
  });
  Moments total(nu, nd);
  for (const auto& p : partial) total.add(p);

  const double inv_r = 1.0 / static_cast<double>(realizations);
  const double n = static_cast<double>(antennas);
  const std::size_t num_ues = scenario.num_ues();
  SignalLevelEstimate out;
  out.realizations = realizations;
  out.ul_terms.assign(num_ues, SinrTerms{});
  out.dl_terms.assign(num_ues, SinrTerms{});
  out.ul_sinr.assign(num_ues, 0.0);
  out.dl_sinr.assign(num_ues, 0.0);

  if (!schedule.ap_ul.empty()) {
    for (Eigen::Index i = 0; i < nu; ++i) {
      const std::size_t k = schedule.ue_ul[static_cast<std::size_t>(i)];
      SinrTerms t;
      // The closed form divides every UL term by N; do the same here.
      double total_power = 0.0;
      double coherent = 0.0;
      double signal = 0.0;
      for (Eigen::Index o = 0; o < nu; ++o) {
        const std::size_t other = schedule.ue_ul[static_cast<std::size_t>(o)];
        const double e = powers.ul_power[other];
        const double mean_sq = std::norm(total.g_sum(i, o) * inv_r);
        total_power += e * total.g_sq(i, o) * inv_r;
        if (o == i) {
          signal = e * mean_sq;
        } else if (contains(scenario.copilots[k], other)) {
          coherent += e * mean_sq;
        }
      }
      t.signal = signal / n;
      t.coherent = coherent / n;
      t.noncoherent = (total_power - signal - coherent) / n;
      t.cross_link = total.cross_ap(i) * inv_r / n;
      t.noise = scenario.geometry.noise() * total.est_norm(i) * inv_r / n;
      out.ul_terms[k] = t;
      out.ul_sinr[k] = t.sinr();
    }
  }
  if (!schedule.ap_dl.empty()) {
    for (Eigen::Index i = 0; i < nd; ++i) {
      const std::size_t ue = schedule.ue_dl[static_cast<std::size_t>(i)];
      SinrTerms t;
      double total_power = 0.0;
      double coherent = 0.0;
      for (Eigen::Index o = 0; o < nd; ++o) {
        const std::size_t other = schedule.ue_dl[static_cast<std::size_t>(o)];
        const double mean_sq = std::norm(total.a_sum(i, o) * inv_r);
        total_power += total.a_sq(i, o) * inv_r;
        if (o == i) {
          t.signal = mean_sq;
        } else if (contains(scenario.copilots[ue], other)) {
          coherent += mean_sq;
        }
      }
      t.coherent = coherent;
      t.noncoherent = total_power - t.signal - coherent;
      t.cross_link = total.cross_ue(i) * inv_r;
      t.noise = scenario.geometry.noise();
      out.dl_terms[ue] = t;
      out.dl_sinr[ue] = t.sinr();
    }
  }
  return out;
}

FixtureSpec validation_fixture_spec() {
  FixtureSpec spec;
  spec.num_aps = 4;
  spec.antennas = 4;
  spec.num_ues = 6;
  spec.tau_p = 4;
  spec.area_side_m = 100.0;
  spec.ul_snr_db = 20.0;
  spec.dl_snr_db = 20.0;
  spec.pilot_snr_db = 30.0;
  spec.num_ul_ues = 3;
  spec.num_ul_aps = 2;
  spec.iterative_pilots = true;
  return spec;
}

Fixture random_fixture(const FixtureSpec& spec, std::uint64_t seed) {
  if (spec.num_ul_ues > spec.num_ues) throw ConfigError("fixture: num_ul_ues exceeds num_ues");
  if (spec.num_ul_aps > spec.num_aps) throw ConfigError("fixture: num_ul_aps exceeds num_aps");
  NetworkConfig net;
  net.area_side_m = spec.area_side_m;
  net.num_aps = spec.num_aps;
  net.antennas_per_ap = spec.antennas;
  net.num_ues = spec.num_ues;
  net.cli_residual_db = spec.cli_residual_db;
  Rng geometry_rng = make_stream(seed, 0);
  NetworkGeometry geometry = build_geometry(net, geometry_rng);

  const double n0 = net.noise_power;
  PilotConfig pilot = PilotConfig::uniform(200, spec.tau_p, spec.num_ues, n0 * db_to_linear(spec.pilot_snr_db));
  Rng pilot_rng = make_stream(seed, 1);
  PilotAssignment assignment = random_assignment(spec.num_ues, spec.tau_p, pilot_rng);
  if (spec.iterative_pilots) assignment = iterative_allocation(geometry, pilot, assignment).assignment;

  Fixture f{Scenario::make(std::move(geometry), std::move(pilot), std::move(assignment)),
            PowerConfig::uniform(spec.num_aps, spec.num_ues, n0 * db_to_linear(spec.ul_snr_db),
                                 n0 * db_to_linear(spec.dl_snr_db)),
            {}};
  split_demand(f.schedule, spec.num_ues, spec.num_ul_ues);
  std::vector<std::size_t> order(spec.num_aps);
  std::iota(order.begin(), order.end(), 0);
  Rng split_rng = make_stream(seed, 3);
  std::shuffle(order.begin(), order.end(), split_rng);
  for (std::size_t i = 0; i < spec.num_aps; ++i) {
    (i < spec.num_ul_aps ? f.schedule.ap_ul : f.schedule.ap_dl).push_back(order[i]);
  }
  std::sort(f.schedule.ap_ul.begin(), f.schedule.ap_ul.end());
  std::sort(f.schedule.ap_dl.begin(), f.schedule.ap_dl.end());
  return f;
}

std::vector<ValidationRow> compare_closed_form(const Schedule& schedule, const Scenario& scenario,
                                               const PowerConfig& powers,
                                               const SignalLevelEstimate& estimate) {
  const RealMatrix kappa = dl_power_coeffs(scenario.stats, schedule, scenario.geometry.antennas());
  std::vector<ValidationRow> rows;
  auto push = [&](std::size_t ue, char dir, double cf, double mc) {
    const double err = cf == 0.0 ? std::abs(mc) : std::abs(mc - cf) / std::abs(cf);
    rows.push_back({ue, dir, cf, mc, err});
  };
  if (!schedule.ap_ul.empty()) {
    for (auto k : schedule.ue_ul) push(k, 'U', ul_sinr_mrc(k, schedule, scenario, powers, kappa), estimate.ul_sinr[k]);
  }
  if (!schedule.ap_dl.empty()) {
    for (auto n : schedule.ue_dl) push(n, 'D', dl_sinr_mfp(n, schedule, scenario, powers, kappa), estimate.dl_sinr[n]);
  }
  return rows;
}

}  // namespace dtdd
