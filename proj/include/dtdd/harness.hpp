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

#ifndef DTDD_HARNESS_HPP_
#define DTDD_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dtdd/geometry.hpp"
#include "dtdd/parallel.hpp"
#include "dtdd/se_closed_form.hpp"
#include "dtdd/se_montecarlo.hpp"

namespace dtdd {

enum class Scheme { kCfDtddGreedy, kCfDtddExhaustive, kCfTdd, kCellularTdd, kCellularFd };
enum class Processing { kMrcMfp, kMmseRzf };
enum class PilotScheme { kRandom, kCellular, kIterative, kOrthogonal };

std::string to_string(Scheme s);
std::string to_string(Processing p);
std::string to_string(PilotScheme p);
Scheme parse_scheme(const std::string& s);
Processing parse_processing(const std::string& s);
PilotScheme parse_pilot_scheme(const std::string& s);

struct ExperimentConfig {
  struct Pilot {
    std::size_t tau = 200;
    std::size_t tau_p = 16;
    double pilot_snr_db = 20.0;
    PilotScheme allocation = PilotScheme::kRandom;
    std::size_t n_iter = 1000;
    double alpha_threshold = std::numeric_limits<double>::infinity();
    std::size_t cells = 4;  // clusters of the cell-based allocation
    friend bool operator==(const Pilot&, const Pilot&) = default;
  };
  struct Powers {
    double ul_snr_db = 10.0;
    double dl_snr_db = 10.0;
    friend bool operator==(const Powers&, const Powers&) = default;
  };
  struct Sweep {
    // "", "snr_db", "ul_snr_db", "dl_snr_db", "cli_residual_db", "demand" or "num_ues".
    std::string parameter;
    std::vector<double> values;
    friend bool operator==(const Sweep&, const Sweep&) = default;
  };
  struct Cellular {
    std::size_t num_cells = 4;
    std::size_t antennas = 0;  // per BS; 0 keeps the cell-free antenna count, M N / L
    friend bool operator==(const Cellular&, const Cellular&) = default;
  };
  struct Tdd {
    std::optional<double> ul_weight;  // default |U_u| / K
    friend bool operator==(const Tdd&, const Tdd&) = default;
  };

  NetworkConfig network;
  Pilot pilot;
  Powers powers;
  double demand = 0.5;  // fraction of UEs with UL demand
  Scheme scheme = Scheme::kCfDtddGreedy;
  Processing processing = Processing::kMrcMfp;
  std::size_t drops = 200;
  std::uint64_t seed = 1;
  Sweep sweep;
  McParams mc;
  Cellular cellular;
  Tdd tdd;

  // Throws ConfigError naming the offending field.
  void validate() const;

  // Copy with the sweep parameter set to `value`.
  ExperimentConfig at_sweep_point(double value) const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Seed of drop d; every scheme and sweep point sees the same UEs and channels.
std::uint64_t drop_seed(std::uint64_t seed, std::size_t drop);

struct DropResult {
  std::size_t drop = 0;
  SEReport report;
  Schedule schedule;  // cell-free DTDD schemes only
  std::size_t evaluations = 0;
  std::size_t tau_p = 0;
  double min_alpha = 0.0;  // min_k alpha at the nearest AP, after allocation
};

// `inner` selects the execution of Monte-Carlo kernels inside the drop.
DropResult run_drop(const ExperimentConfig& config, std::size_t drop,
                    Execution inner = Execution::kSerial);

struct DropRecord {
  std::size_t drop = 0;
  double sum_se = 0.0;
  double ul_se = 0.0;
  double dl_se = 0.0;
  friend bool operator==(const DropRecord&, const DropRecord&) = default;
};

struct CdfPoint {
  double value = 0.0;
  double probability = 0.0;
  friend bool operator==(const CdfPoint&, const CdfPoint&) = default;
};

struct Summary {
  double mean = 0.0;
  double median = 0.0;
  double percentile_90_likely = 0.0;
  friend bool operator==(const Summary&, const Summary&) = default;
};

struct SweepPointResult {
  std::optional<double> value;  // empty when there is no sweep
  std::vector<DropRecord> drops;
  std::vector<CdfPoint> cdf;  // of sum_se
  Summary sum_se;
  Summary ul_se;
  Summary dl_se;
  std::size_t evaluations = 0;
  friend bool operator==(const SweepPointResult&, const SweepPointResult&) = default;
};

struct CampaignResult {
  ExperimentConfig config;
  std::string version;
  double wall_clock_s = 0.0;
  std::vector<SweepPointResult> points;
  friend bool operator==(const CampaignResult&, const CampaignResult&) = default;
};

CampaignResult run_campaign(const ExperimentConfig& config, Execution exec = Execution::kParallel);

// Value exceeded with probability 0.9: the 10th percentile with linear
// interpolation at rank h = (n - 1) * 0.1.
double percentile_90_likely(std::vector<double> samples);
double median(std::vector<double> samples);
// q in [0, 1], same interpolation rule.
double percentile(std::vector<double> samples, double q);
std::vector<CdfPoint> empirical_cdf(std::vector<double> samples);
Summary summarize(const std::vector<double>& samples);

enum class OutputFormat { kCsv, kJson };

std::string to_csv(const CampaignResult& result);
// Writes `path`; throws std::runtime_error naming the path on I/O failure.
void emit_results(const CampaignResult& result, OutputFormat format, const std::string& path);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dtdd

#endif  // DTDD_HARNESS_HPP_
