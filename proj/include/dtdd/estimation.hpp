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

#ifndef DTDD_ESTIMATION_HPP_
#define DTDD_ESTIMATION_HPP_

#include <cstddef>
#include <vector>

#include "dtdd/geometry.hpp"
#include "dtdd/types.hpp"

namespace dtdd {

struct PilotConfig {
  std::size_t tau = 200;   // symbols per slot
  std::size_t tau_p = 16;  // pilot length
  std::vector<double> pilot_power;  // per UE

  void validate(std::size_t num_ues) const;

  // Equal pilot power for every UE.
  static PilotConfig uniform(std::size_t tau, std::size_t tau_p, std::size_t num_ues, double power);
};

// Partition of the UEs into pilot groups. Stored as one pilot label per UE.
class PilotAssignment {
 public:
  PilotAssignment() = default;
  PilotAssignment(std::size_t num_pilots, std::vector<std::size_t> pilot_of_ue);

  // tau_p = K, UE k on pilot k.
  static PilotAssignment orthogonal(std::size_t num_ues);

  std::size_t num_pilots() const { return num_pilots_; }
  std::size_t num_ues() const { return pilot_of_.size(); }
  std::size_t pilot_of(std::size_t ue) const { return pilot_of_[ue]; }
  const std::vector<std::size_t>& labels() const { return pilot_of_; }

  // Members of every group, ascending.
  std::vector<IndexSet> groups() const;
  IndexSet group(std::size_t pilot) const;

  // Moves one UE to another pilot group.
  void move(std::size_t ue, std::size_t pilot);

  // Throws ConfigError naming the offending UE.
  void validate(std::size_t num_ues) const;

  friend bool operator==(const PilotAssignment&, const PilotAssignment&) = default;

 private:
  std::size_t num_pilots_ = 0;
  std::vector<std::size_t> pilot_of_;
};

// LMMSE estimate statistics per AP-UE pair.
struct EstimationStats {
  RealMatrix alpha_sq;      // variance of the estimate
  RealMatrix alpha_bar_sq;  // variance of the estimation error
  RealMatrix c;             // LMMSE normalisation
};

EstimationStats estimation_stats(const NetworkGeometry& geometry, const PilotConfig& pilot,
                                 const PilotAssignment& assignment);

// alpha^2 of a single link, evaluated under the given assignment. Used by the
// pilot allocator to score tentative moves without rebuilding the full matrix.
double link_alpha_sq(const NetworkGeometry& geometry, const PilotConfig& pilot,
                     const PilotAssignment& assignment, std::size_t ap, std::size_t ue);

// One coherence block of small-scale fading.
//
// The pilot phase is simulated explicitly: true channels and pilot noise are
// drawn, every AP projects its received pilots on each sequence and scales by
// the LMMSE gain. Co-pilot estimates therefore come out collinear, which the
// coherent-interference terms depend on; marginally each estimate is
// CN(0, alpha^2 I) and each error CN(0, alpha_bar^2 I).
struct ChannelRealization {
  std::vector<ComplexMatrix> channel;   // per AP: N x K true channels f_mk
  std::vector<ComplexMatrix> estimate;  // per AP: N x K estimates
  // Residual AP-AP channels, M*M row-major blocks (m receives from j), N x N.
  // Empty unless requested.
  std::vector<ComplexMatrix> inter_ap;
  ComplexMatrix ue_ue;  // K x K UE-UE channels (n, k); empty unless requested

  std::size_t num_aps() const { return channel.size(); }
  const ComplexMatrix& inter_ap_block(std::size_t m, std::size_t j) const {
    return inter_ap[m * channel.size() + j];
  }
};

struct DrawOptions {
  bool inter_ap = false;
  bool ue_ue = false;
};

ChannelRealization draw_channel_block(const NetworkGeometry& geometry, const PilotConfig& pilot,
                                      const PilotAssignment& assignment,
                                      const EstimationStats& stats, Rng& rng,
                                      DrawOptions options = {});

}  // namespace dtdd

#endif  // DTDD_ESTIMATION_HPP_
