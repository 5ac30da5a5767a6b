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

#ifndef DTDD_VALIDATION_HPP_
#define DTDD_VALIDATION_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dtdd/parallel.hpp"
#include "dtdd/se_closed_form.hpp"

namespace dtdd {

// Signal-level Monte-Carlo of the MRC uplink and MFP downlink. Every channel,
// AP-AP matrix and UE-UE coefficient is drawn, the combined or received
// signal is formed explicitly, and each use-and-then-forget term is estimated
// by sample averages. Terms are reported on the same scale as SinrTerms of
// the closed form so they can be compared one by one.
struct SignalLevelEstimate {
  std::size_t realizations = 0;
  std::vector<SinrTerms> ul_terms;  // indexed by UE
  std::vector<SinrTerms> dl_terms;
  std::vector<double> ul_sinr;
  std::vector<double> dl_sinr;
};

SignalLevelEstimate signal_level_mrc_mfp(const Schedule& schedule, const Scenario& scenario,
                                         const PowerConfig& powers, std::size_t realizations,
                                         std::uint64_t seed, Execution exec = Execution::kParallel);

// Small random instance for validation runs, audits and oracle comparisons.
struct FixtureSpec {
  std::size_t num_aps = 3;
  std::size_t antennas = 2;
  std::size_t num_ues = 4;
  std::size_t tau_p = 2;
  double area_side_m = 200.0;
  double ul_snr_db = 20.0;
  double dl_snr_db = 20.0;
  double pilot_snr_db = 20.0;
  double cli_residual_db = 0.0;
  std::size_t num_ul_ues = 2;  // UEs [0, num_ul_ues) demand UL
  std::size_t num_ul_aps = 1;  // random APs put in UL mode, the rest DL
  // Refine the random pilot reuse with the iterative allocator.
  bool iterative_pilots = false;
};

struct Fixture {
  Scenario scenario;
  PowerConfig powers;
  Schedule schedule;
};

// Random UE drop, pilot reuse and AP split, all from `seed`.
Fixture random_fixture(const FixtureSpec& spec, std::uint64_t seed);

// Instance family for closed-form validation runs: M=4, N=4, K=6, tau_p=4,
// two APs and three UEs per direction on a 100 m square with 30 dB pilots and
// iteratively refined reuse. Links with poor estimates make the term
// estimators converge too slowly for a 2% check at 1e5 draws.
FixtureSpec validation_fixture_spec();

struct ValidationRow {
  std::size_t ue = 0;
  char direction = 'U';
  double closed_form = 0.0;
  double monte_carlo = 0.0;
  double relative_error = 0.0;
};

// Compares every served UE of the schedule against the closed form.
std::vector<ValidationRow> compare_closed_form(const Schedule& schedule, const Scenario& scenario,
                                               const PowerConfig& powers,
                                               const SignalLevelEstimate& estimate);

}  // namespace dtdd

#endif  // DTDD_VALIDATION_HPP_
