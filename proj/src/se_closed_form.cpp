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

#include "dtdd/se_closed_form.hpp"

#include <cmath>
#include <string>

namespace dtdd {
namespace {

void check_index_set(const IndexSet& set, std::size_t bound, const char* name) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set[i] >= bound) {
      throw ConfigError(std::string("schedule.") + name + " contains out-of-range index " +
                        std::to_string(set[i]));
    }
    if (i > 0 && set[i] <= set[i - 1]) {
      throw ConfigError(std::string("schedule.") + name + " must be sorted and duplicate-free");
    }
  }
}

}  // namespace

void Schedule::validate(std::size_t num_aps, std::size_t num_ues) const {
  check_index_set(ap_ul, num_aps, "ap_ul");
  check_index_set(ap_dl, num_aps, "ap_dl");
  check_index_set(ue_ul, num_ues, "ue_ul");
  check_index_set(ue_dl, num_ues, "ue_dl");
  for (auto m : ap_ul) {
    if (contains(ap_dl, m)) throw ConfigError("schedule: AP " + std::to_string(m) + " is both UL and DL");
  }
  std::vector<int> seen(num_ues, 0);
  for (auto k : ue_ul) ++seen[k];
  for (auto k : ue_dl) ++seen[k];
  for (std::size_t k = 0; k < num_ues; ++k) {
    if (seen[k] != 1) {
      throw ConfigError("schedule: UE " + std::to_string(k) + " must demand exactly one direction");
    }
  }
}

std::vector<char> Schedule::ap_modes(std::size_t num_aps) const {
  std::vector<char> modes(num_aps, '-');
  for (auto m : ap_ul) modes[m] = 'U';
  for (auto m : ap_dl) modes[m] = 'D';
  return modes;
}

void split_demand(Schedule& schedule, std::size_t num_ues, std::size_t num_ul) {
  schedule.ue_ul.clear();
  schedule.ue_dl.clear();
  for (std::size_t k = 0; k < num_ues; ++k) {
    (k < num_ul ? schedule.ue_ul : schedule.ue_dl).push_back(k);
  }
}

void PowerConfig::validate(std::size_t num_aps, std::size_t num_ues) const {
  if (ul_power.size() != num_ues) throw ConfigError("powers.ul_power must have one entry per UE");
  if (dl_power.size() != num_aps) throw ConfigError("powers.dl_power must have one entry per AP");
  for (double e : ul_power) {
    if (!(e >= 0.0)) throw ConfigError("powers.ul_power must be non-negative");
  }
  for (double e : dl_power) {
    if (!(e >= 0.0)) throw ConfigError("powers.dl_power must be non-negative");
  }
}

PowerConfig PowerConfig::uniform(std::size_t num_aps, std::size_t num_ues, double ul, double dl) {
  return PowerConfig{std::vector<double>(num_ues, ul), std::vector<double>(num_aps, dl)};
}

Scenario Scenario::make(NetworkGeometry geometry, PilotConfig pilot, PilotAssignment assignment) {
  pilot.validate(geometry.num_ues());
  assignment.validate(geometry.num_ues());
  Scenario s{std::move(geometry), std::move(pilot), std::move(assignment), {}, {}};
  s.stats = estimation_stats(s.geometry, s.pilot, s.assignment);
  const auto groups = s.assignment.groups();
  s.copilots.resize(s.num_ues());
  for (std::size_t k = 0; k < s.num_ues(); ++k) {
    for (auto n : groups[s.assignment.pilot_of(k)]) {
      if (n != k) s.copilots[k].push_back(n);
    }
  }
  return s;
}

double Scenario::prelog() const {
  return static_cast<double>(pilot.tau - pilot.tau_p) / static_cast<double>(pilot.tau);
}

SEReport compose_report(std::vector<double> ul_sinr, std::vector<double> dl_sinr, double prelog) {
  SEReport r;
  r.prelog = prelog;
  r.ul_se.resize(ul_sinr.size());
  r.dl_se.resize(dl_sinr.size());
  double ul = 0.0;
  double dl = 0.0;
  for (std::size_t k = 0; k < ul_sinr.size(); ++k) {
    r.ul_se[k] = std::log2(1.0 + ul_sinr[k]);
    ul += r.ul_se[k];
  }
  for (std::size_t k = 0; k < dl_sinr.size(); ++k) {
    r.dl_se[k] = std::log2(1.0 + dl_sinr[k]);
    dl += r.dl_se[k];
  }
  r.ul_sinr = std::move(ul_sinr);
  r.dl_sinr = std::move(dl_sinr);
  r.ul_sum_se = prelog * ul;
  r.dl_sum_se = prelog * dl;
  r.sum_se = prelog * (ul + dl);
  return r;
}

RealMatrix dl_power_coeffs(const EstimationStats& stats, const Schedule& schedule,
                           std::size_t antennas) {
  RealMatrix kappa = RealMatrix::Zero(stats.alpha_sq.rows(), stats.alpha_sq.cols());
  for (auto j : schedule.ap_dl) {
    double total = 0.0;
    for (auto k : schedule.ue_dl) total += stats.alpha_sq(j, k);
    if (total <= 0.0) continue;
    const double value = 1.0 / (static_cast<double>(antennas) * total);
    for (auto n : schedule.ue_dl) kappa(j, n) = value;
  }
  return kappa;
}

double SinrTerms::sinr() const {
  if (signal <= 0.0) return 0.0;
  return signal / (noncoherent + coherent + cross_link + noise);
}

SinrTerms ul_terms_mrc(std::size_t k, const Schedule& schedule, const Scenario& scenario,
                       const PowerConfig& powers, const RealMatrix& kappa) {
  SinrTerms t;
  if (schedule.ap_ul.empty()) return t;
  const auto& a2 = scenario.stats.alpha_sq;
  const auto& beta = scenario.geometry.beta;
  const auto& ep = scenario.pilot.pilot_power;
  const double n_ant = static_cast<double>(scenario.geometry.antennas());

  double s = 0.0;
  for (auto m : schedule.ap_ul) s += a2(m, k);
  t.signal = n_ant * powers.ul_power[k] * s * s;
  t.noise = scenario.geometry.noise() * s;

  for (auto n : schedule.ue_ul) {
    double acc = 0.0;
    for (auto m : schedule.ap_ul) acc += a2(m, k) * beta(m, n);
    t.noncoherent += powers.ul_power[n] * acc;
  }
  for (auto n : scenario.copilots[k]) {
    if (!contains(schedule.ue_ul, n)) continue;
    const double ratio = std::sqrt(ep[n] / ep[k]);
    double acc = 0.0;
    for (auto m : schedule.ap_ul) acc += a2(m, k) * ratio * beta(m, n) / beta(m, k);
    t.coherent += n_ant * powers.ul_power[n] * acc * acc;
  }
  const auto& zeta = scenario.geometry.zeta;
  for (auto j : schedule.ap_dl) {
    // sum_n kappa^2_jn alpha^2_jn E_d,j is shared by every UL AP m.
    double radiated = 0.0;
    for (auto n : schedule.ue_dl) radiated += kappa(j, n) * kappa(j, n) * a2(j, n);
    radiated *= powers.dl_power[j];
    if (radiated == 0.0) continue;
    for (auto m : schedule.ap_ul) t.cross_link += n_ant * zeta(m, j) * a2(m, k) * radiated;
  }
  return t;
}

double ul_sinr_mrc(std::size_t k, const Schedule& schedule, const Scenario& scenario,
                   const PowerConfig& powers, const RealMatrix& kappa) {
  return ul_terms_mrc(k, schedule, scenario, powers, kappa).sinr();
}

SinrTerms dl_terms_mfp(std::size_t n, const Schedule& schedule, const Scenario& scenario,
                       const PowerConfig& powers, const RealMatrix& kappa) {
  SinrTerms t;
  if (schedule.ap_dl.empty()) return t;
  const auto& a2 = scenario.stats.alpha_sq;
  const auto& beta = scenario.geometry.beta;
  const auto& ep = scenario.pilot.pilot_power;
  const double n_ant = static_cast<double>(scenario.geometry.antennas());

  double amp = 0.0;
  for (auto j : schedule.ap_dl) amp += kappa(j, n) * std::sqrt(powers.dl_power[j]) * a2(j, n);
  t.signal = n_ant * n_ant * amp * amp;
  t.noise = scenario.geometry.noise();

  for (auto q : schedule.ue_dl) {
    for (auto j : schedule.ap_dl) {
      t.noncoherent += n_ant * powers.dl_power[j] * kappa(j, q) * kappa(j, q) * beta(j, n) * a2(j, q);
    }
  }
  for (auto q : scenario.copilots[n]) {
    if (!contains(schedule.ue_dl, q)) continue;
    const double ratio = std::sqrt(ep[n] / ep[q]);
    double acc = 0.0;
    for (auto j : schedule.ap_dl) {
      acc += std::sqrt(powers.dl_power[j]) * kappa(j, q) * a2(j, q) * ratio * beta(j, n) / beta(j, q);
    }
    t.coherent += n_ant * n_ant * acc * acc;
  }
  for (auto k : schedule.ue_ul) {
    t.cross_link += powers.ul_power[k] * scenario.geometry.epsilon(n, k);
  }
  return t;
}

double dl_sinr_mfp(std::size_t n, const Schedule& schedule, const Scenario& scenario,
                   const PowerConfig& powers, const RealMatrix& kappa) {
  return dl_terms_mfp(n, schedule, scenario, powers, kappa).sinr();
}

SEReport sum_se(const Schedule& schedule, const Scenario& scenario, const PowerConfig& powers) {
  const std::size_t num_ues = scenario.num_ues();
  const RealMatrix kappa = dl_power_coeffs(scenario.stats, schedule, scenario.geometry.antennas());
  std::vector<double> ul(num_ues, 0.0);
  std::vector<double> dl(num_ues, 0.0);
  for (auto k : schedule.ue_ul) ul[k] = ul_sinr_mrc(k, schedule, scenario, powers, kappa);
  for (auto n : schedule.ue_dl) dl[n] = dl_sinr_mfp(n, schedule, scenario, powers, kappa);
  return compose_report(std::move(ul), std::move(dl), scenario.prelog());
}

}  // namespace dtdd
