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

#include "dtdd/estimation.hpp"

#include <cmath>
#include <string>

namespace dtdd {

void PilotConfig::validate(std::size_t num_ues) const {
  if (tau_p < 1) throw ConfigError("pilot.tau_p must be >= 1");
  if (tau_p > tau) throw ConfigError("pilot.tau_p must be <= pilot.tau");
  if (pilot_power.size() != num_ues) {
    throw ConfigError("pilot.pilot_power must have one entry per UE");
  }
  for (std::size_t k = 0; k < pilot_power.size(); ++k) {
    if (!(pilot_power[k] > 0.0)) {
      throw ConfigError("pilot.pilot_power[" + std::to_string(k) + "] must be > 0");
    }
  }
}

PilotConfig PilotConfig::uniform(std::size_t tau, std::size_t tau_p, std::size_t num_ues, double power) {
  PilotConfig p;
  p.tau = tau;
  p.tau_p = tau_p;
  p.pilot_power.assign(num_ues, power);
  return p;
}

PilotAssignment::PilotAssignment(std::size_t num_pilots, std::vector<std::size_t> pilot_of_ue)
    : num_pilots_(num_pilots), pilot_of_(std::move(pilot_of_ue)) {
  validate(pilot_of_.size());
}

PilotAssignment PilotAssignment::orthogonal(std::size_t num_ues) {
  return PilotAssignment(num_ues, iota_set(num_ues));
}

std::vector<IndexSet> PilotAssignment::groups() const {
  std::vector<IndexSet> out(num_pilots_);
  for (std::size_t k = 0; k < pilot_of_.size(); ++k) out[pilot_of_[k]].push_back(k);
  return out;
}

IndexSet PilotAssignment::group(std::size_t pilot) const {
  IndexSet out;
  for (std::size_t k = 0; k < pilot_of_.size(); ++k) {
    if (pilot_of_[k] == pilot) out.push_back(k);
  }
  return out;
}

void PilotAssignment::move(std::size_t ue, std::size_t pilot) {
  if (ue >= pilot_of_.size()) throw std::out_of_range("PilotAssignment::move: UE index");
  if (pilot >= num_pilots_) throw std::out_of_range("PilotAssignment::move: pilot index");
  pilot_of_[ue] = pilot;
}

void PilotAssignment::validate(std::size_t num_ues) const {
  if (num_pilots_ < 1) throw ConfigError("pilot assignment needs at least one pilot");
  if (pilot_of_.size() != num_ues) {
    throw ConfigError("pilot assignment covers " + std::to_string(pilot_of_.size()) +
                      " UEs, expected " + std::to_string(num_ues));
  }
  for (std::size_t k = 0; k < pilot_of_.size(); ++k) {
    if (pilot_of_[k] >= num_pilots_) {
      throw ConfigError("UE " + std::to_string(k) + " assigned to pilot " +
                        std::to_string(pilot_of_[k]) + " >= tau_p");
    }
  }
}

namespace {

// tau_p * sum_{n in I_p} E_p,n beta_mn + N0 for the group of `ue`.
double received_pilot_power(const NetworkGeometry& geometry, const PilotConfig& pilot,
                            const PilotAssignment& assignment, std::size_t ap, std::size_t ue) {
  const double tau_p = static_cast<double>(pilot.tau_p);
  const std::size_t p = assignment.pilot_of(ue);
  double sum = 0.0;
  for (std::size_t n = 0; n < assignment.num_ues(); ++n) {
    if (assignment.pilot_of(n) == p) sum += pilot.pilot_power[n] * geometry.beta(ap, n);
  }
  return tau_p * sum + geometry.noise();
}

}  // namespace

double link_alpha_sq(const NetworkGeometry& geometry, const PilotConfig& pilot,
                     const PilotAssignment& assignment, std::size_t ap, std::size_t ue) {
  const double c = 1.0 / received_pilot_power(geometry, pilot, assignment, ap, ue);
  const double b = geometry.beta(ap, ue);
  return c * static_cast<double>(pilot.tau_p) * pilot.pilot_power[ue] * b * b;
}

EstimationStats estimation_stats(const NetworkGeometry& geometry, const PilotConfig& pilot,
                                 const PilotAssignment& assignment) {
  const std::size_t m_count = geometry.num_aps();
  const std::size_t k_count = geometry.num_ues();
  pilot.validate(k_count);
  assignment.validate(k_count);
  if (assignment.num_pilots() > pilot.tau_p) {
    throw ConfigError("pilot assignment uses more pilots than pilot.tau_p");
  }

  const double tau_p = static_cast<double>(pilot.tau_p);
  EstimationStats s;
  s.alpha_sq.resize(m_count, k_count);
  s.alpha_bar_sq.resize(m_count, k_count);
  s.c.resize(m_count, k_count);

  // Per (AP, pilot) received pilot power, shared by the whole group.
  RealMatrix group_power = RealMatrix::Zero(m_count, assignment.num_pilots());
  for (std::size_t m = 0; m < m_count; ++m) {
    for (std::size_t k = 0; k < k_count; ++k) {
      group_power(m, assignment.pilot_of(k)) += pilot.pilot_power[k] * geometry.beta(m, k);
    }
  }
  for (std::size_t m = 0; m < m_count; ++m) {
    for (std::size_t k = 0; k < k_count; ++k) {
      const double c = 1.0 / (tau_p * group_power(m, assignment.pilot_of(k)) + geometry.noise());
      const double b = geometry.beta(m, k);
      const double a2 = c * tau_p * pilot.pilot_power[k] * b * b;
      s.c(m, k) = c;
      s.alpha_sq(m, k) = a2;
      s.alpha_bar_sq(m, k) = std::max(0.0, b - a2);
    }
  }
  return s;
}

ChannelRealization draw_channel_block(const NetworkGeometry& geometry, const PilotConfig& pilot,
                                      const PilotAssignment& assignment,
                                      const EstimationStats& stats, Rng& rng,
                                      DrawOptions options) {
  const std::size_t m_count = geometry.num_aps();
  const std::size_t k_count = geometry.num_ues();
  const std::size_t n_ant = geometry.antennas();
  const std::size_t n_pilots = assignment.num_pilots();
  const double tau_p = static_cast<double>(pilot.tau_p);

  ChannelRealization r;
  r.channel.resize(m_count);
  r.estimate.resize(m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    ComplexMatrix& f = r.channel[m];
    f.resize(n_ant, k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
      for (std::size_t a = 0; a < n_ant; ++a) f(a, k) = draw_cn(rng, geometry.beta(m, k));
    }

    // Projected pilot observation per sequence.
    ComplexMatrix y(n_ant, n_pilots);
    for (std::size_t p = 0; p < n_pilots; ++p) {
      for (std::size_t a = 0; a < n_ant; ++a) y(a, p) = draw_cn(rng, geometry.noise());
    }
    for (std::size_t k = 0; k < k_count; ++k) {
      y.col(assignment.pilot_of(k)) += std::sqrt(tau_p * pilot.pilot_power[k]) * f.col(k);
    }

    ComplexMatrix& fh = r.estimate[m];
    fh.resize(n_ant, k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
      const double gain = stats.c(m, k) * std::sqrt(tau_p * pilot.pilot_power[k]) * geometry.beta(m, k);
      fh.col(k) = gain * y.col(assignment.pilot_of(k));
    }
  }

  if (options.inter_ap) {
    r.inter_ap.resize(m_count * m_count);
    for (std::size_t m = 0; m < m_count; ++m) {
      for (std::size_t j = 0; j < m_count; ++j) {
        ComplexMatrix& g = r.inter_ap[m * m_count + j];
        if (m == j) {
          g = ComplexMatrix::Zero(n_ant, n_ant);
          continue;
        }
        g.resize(n_ant, n_ant);
        const double var = geometry.zeta(m, j);
        for (Eigen::Index c = 0; c < g.cols(); ++c) {
          for (Eigen::Index a = 0; a < g.rows(); ++a) g(a, c) = draw_cn(rng, var);
        }
      }
    }
  }

  if (options.ue_ue) {
    r.ue_ue = ComplexMatrix::Zero(k_count, k_count);
    for (std::size_t n = 0; n < k_count; ++n) {
      for (std::size_t k = 0; k < k_count; ++k) {
        if (n != k) r.ue_ue(n, k) = draw_cn(rng, geometry.epsilon(n, k));
      }
    }
  }
  return r;
}

}  // namespace dtdd
