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

#include "dtdd/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <stdexcept>

#include "dtdd/fd_cellular.hpp"
#include "dtdd/pilots.hpp"
#include "dtdd/scheduler.hpp"
#include "dtdd/serialization.hpp"

namespace dtdd {
namespace {

template <typename E>
struct NamedValue {
  const char* name;
  E value;
};

constexpr NamedValue<Scheme> kSchemes[] = {
    {"cf_dtdd_greedy", Scheme::kCfDtddGreedy}, {"cf_dtdd_exhaustive", Scheme::kCfDtddExhaustive},
    {"cf_tdd", Scheme::kCfTdd},                {"cellular_tdd", Scheme::kCellularTdd},
    {"cellular_fd", Scheme::kCellularFd}};
constexpr NamedValue<Processing> kProcessing[] = {{"mrc_mfp", Processing::kMrcMfp},
                                                  {"mmse_rzf", Processing::kMmseRzf}};
constexpr NamedValue<PilotScheme> kPilotSchemes[] = {{"random", PilotScheme::kRandom},
                                                     {"cellular", PilotScheme::kCellular},
                                                     {"iterative", PilotScheme::kIterative},
                                                     {"orthogonal", PilotScheme::kOrthogonal}};

template <typename E, std::size_t N>
std::string name_of(const NamedValue<E> (&table)[N], E value) {
  for (const auto& entry : table) {
    if (entry.value == value) return entry.name;
  }
  return "?";
}

template <typename E, std::size_t N>
E parse_named(const NamedValue<E> (&table)[N], const std::string& text, const char* field) {
  for (const auto& entry : table) {
    if (text == entry.name) return entry.value;
  }
  std::string options;
  for (const auto& entry : table) options += std::string(options.empty() ? "" : ", ") + entry.name;
  throw ConfigError(std::string(field) + ": unknown value '" + text + "' (expected one of " + options + ")");
}

constexpr const char* kSweepParameters[] = {"snr_db",          "ul_snr_db", "dl_snr_db",
                                            "pilot_snr_db",    "cli_residual_db", "demand",
                                            "num_ues",         "antennas_per_ap"};

bool is_cellular(Scheme s) { return s == Scheme::kCellularTdd || s == Scheme::kCellularFd; }

}  // namespace

std::string to_string(Scheme s) { return name_of(kSchemes, s); }
std::string to_string(Processing p) { return name_of(kProcessing, p); }
std::string to_string(PilotScheme p) { return name_of(kPilotSchemes, p); }
Scheme parse_scheme(const std::string& s) { return parse_named(kSchemes, s, "scheme"); }
Processing parse_processing(const std::string& s) { return parse_named(kProcessing, s, "processing"); }
PilotScheme parse_pilot_scheme(const std::string& s) {
  return parse_named(kPilotSchemes, s, "pilot.allocation");
}

void ExperimentConfig::validate() const {
  network.validate();
  if (pilot.tau < 1) throw ConfigError("pilot.tau must be >= 1");
  if (pilot.tau_p < 1 || pilot.tau_p > pilot.tau) throw ConfigError("pilot.tau_p must lie in [1, pilot.tau]");
  if (pilot.allocation == PilotScheme::kOrthogonal && network.num_ues > pilot.tau) {
    throw ConfigError("pilot.allocation=orthogonal needs pilot.tau >= network.num_ues");
  }
  if (pilot.n_iter < 1) throw ConfigError("pilot.n_iter must be >= 1");
  if (pilot.cells < 1) throw ConfigError("pilot.cells must be >= 1");
  if (!(demand >= 0.0 && demand <= 1.0)) throw ConfigError("demand must lie in [0, 1]");
  if (drops < 1) throw ConfigError("drops must be >= 1");
  if (scheme == Scheme::kCfDtddExhaustive && processing == Processing::kMmseRzf) {
    throw ConfigError("scheme=cf_dtdd_exhaustive supports processing=mrc_mfp only");
  }
  if (scheme == Scheme::kCfDtddExhaustive && network.num_aps > kDefaultExhaustiveCap) {
    throw ConfigError("scheme=cf_dtdd_exhaustive needs network.num_aps <= " +
                      std::to_string(kDefaultExhaustiveCap));
  }
  mc.validate();
  if (cellular.num_cells < 1) throw ConfigError("cellular.num_cells must be >= 1");
  if (tdd.ul_weight && !(*tdd.ul_weight >= 0.0 && *tdd.ul_weight <= 1.0)) {
    throw ConfigError("tdd.ul_weight must lie in [0, 1]");
  }
  if (!sweep.parameter.empty()) {
    if (std::find_if(std::begin(kSweepParameters), std::end(kSweepParameters),
                     [&](const char* p) { return sweep.parameter == p; }) == std::end(kSweepParameters)) {
      throw ConfigError("sweep.parameter: unknown parameter '" + sweep.parameter + "'");
    }
    if (sweep.values.empty()) throw ConfigError("sweep.values must not be empty");
  } else if (!sweep.values.empty()) {
    throw ConfigError("sweep.values given without sweep.parameter");
  }
}

ExperimentConfig ExperimentConfig::at_sweep_point(double value) const {
  ExperimentConfig c = *this;
  const std::string& p = sweep.parameter;
  auto as_count = [&](const char* field) {
    if (!(value >= 1.0) || value != std::floor(value)) {
      throw ConfigError(std::string("sweep value for ") + field + " must be a positive integer");
    }
    return static_cast<std::size_t>(value);
  };
  if (p == "snr_db") {
    c.powers.ul_snr_db = value;
    c.powers.dl_snr_db = value;
  } else if (p == "ul_snr_db") {
    c.powers.ul_snr_db = value;
  } else if (p == "dl_snr_db") {
    c.powers.dl_snr_db = value;
  } else if (p == "pilot_snr_db") {
    c.pilot.pilot_snr_db = value;
  } else if (p == "cli_residual_db") {
    c.network.cli_residual_db = value;
  } else if (p == "demand") {
    c.demand = value;
  } else if (p == "num_ues") {
    c.network.num_ues = as_count("num_ues");
  } else if (p == "antennas_per_ap") {
    c.network.antennas_per_ap = as_count("antennas_per_ap");
  } else {
    throw ConfigError("sweep.parameter: unknown parameter '" + p + "'");
  }
  return c;
}

std::uint64_t drop_seed(std::uint64_t seed, std::size_t drop) {
  Rng rng = make_stream(seed, 0xD509, drop);
  return rng();
}

namespace {

SEReport evaluate(const Schedule& schedule, const Scenario& scenario, const PowerConfig& powers,
                  const ExperimentConfig& config, std::uint64_t seed, Execution inner) {
  if (config.processing == Processing::kMrcMfp) return sum_se(schedule, scenario, powers);
  return mc_sum_se(schedule, scenario, powers, config.mc, seed, inner);
}

// Time-shares a UL-only and a DL-only evaluation.
SEReport time_share(const SEReport& up, const SEReport& down, double ul_weight) {
  SEReport r = compose_report(up.ul_sinr, down.dl_sinr, up.prelog);
  r.ul_se = up.ul_se;
  r.dl_se = down.dl_se;
  r.ul_sum_se = ul_weight * up.ul_sum_se;
  r.dl_sum_se = (1.0 - ul_weight) * down.dl_sum_se;
  r.sum_se = r.ul_sum_se + r.dl_sum_se;
  return r;
}

}  // namespace

DropResult run_drop(const ExperimentConfig& config, std::size_t drop, Execution inner) {
  config.validate();
  const std::uint64_t seed = drop_seed(config.seed, drop);
  Rng geometry_rng = make_stream(seed, 0);
  NetworkGeometry geometry = build_geometry(config.network, geometry_rng);

  const std::size_t num_aps = geometry.num_aps();
  const std::size_t num_ues = geometry.num_ues();
  const auto num_ul = static_cast<std::size_t>(std::lround(config.demand * static_cast<double>(num_ues)));
  Schedule demand;
  split_demand(demand, num_ues, num_ul);
  const double ul_weight = config.tdd.ul_weight.value_or(static_cast<double>(num_ul) / static_cast<double>(num_ues));

  const double n0 = config.network.noise_power;
  const double e_p = n0 * db_to_linear(config.pilot.pilot_snr_db);
  const double e_u = n0 * db_to_linear(config.powers.ul_snr_db);
  const double e_d = n0 * db_to_linear(config.powers.dl_snr_db);

  DropResult out;
  out.drop = drop;

  if (is_cellular(config.scheme)) {
    const std::size_t cells = config.cellular.num_cells;
    const std::size_t antennas = config.cellular.antennas > 0
                                     ? config.cellular.antennas
                                     : std::max<std::size_t>(1, num_aps * geometry.antennas() / cells);
    const CellularLayout layout =
        build_cellular_layout(geometry, cells, antennas, config.network.cli_residual_db);
    // Same total DL power as the cell-free network.
    const CellularPowers powers{std::vector<double>(num_ues, e_p), std::vector<double>(num_ues, e_u),
                                std::vector<double>(cells, e_d * static_cast<double>(num_aps) /
                                                               static_cast<double>(cells))};
    out.tau_p = layout.tau_p;
    out.report = config.scheme == Scheme::kCellularFd
                     ? fd_cellular_sum_se(layout, powers, demand.ue_ul, demand.ue_dl, config.pilot.tau)
                     : cellular_tdd_sum_se(layout, powers, demand.ue_ul, demand.ue_dl, config.pilot.tau,
                                           ul_weight);
    return out;
  }

  PilotConfig pilot = PilotConfig::uniform(config.pilot.tau, config.pilot.tau_p, num_ues, e_p);
  Rng pilot_rng = make_stream(seed, 1);
  PilotAssignment assignment;
  switch (config.pilot.allocation) {
    case PilotScheme::kOrthogonal:
      assignment = PilotAssignment::orthogonal(num_ues);
      pilot.tau_p = num_ues;
      break;
    case PilotScheme::kRandom:
      assignment = random_assignment(num_ues, pilot.tau_p, pilot_rng);
      break;
    case PilotScheme::kCellular: {
      auto cell = cellular_assignment(geometry, pilot.tau_p, config.pilot.cells);
      assignment = std::move(cell.assignment);
      pilot.tau_p = cell.effective_tau_p;
      break;
    }
    case PilotScheme::kIterative: {
      const PilotAssignment initial = random_assignment(num_ues, pilot.tau_p, pilot_rng);
      PilotAllocParams params;
      params.n_iter = config.pilot.n_iter;
      params.alpha_threshold = config.pilot.alpha_threshold;
      assignment = iterative_allocation(geometry, pilot, initial, params).assignment;
      break;
    }
  }
  if (pilot.tau_p > pilot.tau) {
    throw ConfigError("pilot length " + std::to_string(pilot.tau_p) + " exceeds pilot.tau");
  }
  out.tau_p = pilot.tau_p;
  out.min_alpha = min_nearest_alpha(geometry, pilot, assignment);

  const Scenario scenario = Scenario::make(std::move(geometry), std::move(pilot), std::move(assignment));
  const PowerConfig powers = PowerConfig::uniform(num_aps, num_ues, e_u, e_d);

  switch (config.scheme) {
    case Scheme::kCfDtddGreedy:
    case Scheme::kCfDtddExhaustive: {
      const SchedulingContext ctx = make_context(scenario, powers, demand.ue_ul, demand.ue_dl);
      const ScheduleSearchResult found = config.scheme == Scheme::kCfDtddGreedy
                                             ? greedy_schedule(ctx)
                                             : exhaustive_schedule(ctx, SearchMetric::kTrueSumSe, inner);
      out.schedule = found.schedule;
      out.evaluations = found.evaluations;
      out.report = evaluate(out.schedule, scenario, powers, config, seed, inner);
      break;
    }
    case Scheme::kCfTdd: {
      Schedule up = demand;
      up.ap_ul = iota_set(num_aps);
      Schedule down = demand;
      down.ap_dl = iota_set(num_aps);
      // UL UEs are silent during the DL phase.
      PowerConfig down_powers = powers;
      for (auto k : demand.ue_ul) down_powers.ul_power[k] = 0.0;
      out.report = time_share(evaluate(up, scenario, powers, config, seed, inner),
                              evaluate(down, scenario, down_powers, config, seed, inner), ul_weight);
      break;
    }
    default:
      break;
  }
  return out;
}

double percentile(std::vector<double> samples, double q) {
  if (samples.empty()) throw std::invalid_argument("percentile of an empty sample set");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("percentile level must lie in [0, 1]");
  std::sort(samples.begin(), samples.end());
  const double h = static_cast<double>(samples.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, samples.size() - 1);
  return samples[lo] + (h - static_cast<double>(lo)) * (samples[hi] - samples[lo]);
}

double percentile_90_likely(std::vector<double> samples) { return percentile(std::move(samples), 0.1); }

double median(std::vector<double> samples) { return percentile(std::move(samples), 0.5); }

std::vector<CdfPoint> empirical_cdf(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  std::vector<CdfPoint> cdf(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    cdf[i] = {samples[i], static_cast<double>(i + 1) / static_cast<double>(samples.size())};
  }
  return cdf;
}

Summary summarize(const std::vector<double>& samples) {
  Summary s;
  if (samples.empty()) return s;
  double total = 0.0;
  for (double v : samples) total += v;
  s.mean = total / static_cast<double>(samples.size());
  s.median = median(samples);
  s.percentile_90_likely = percentile_90_likely(samples);
  return s;
}

CampaignResult run_campaign(const ExperimentConfig& config, Execution exec) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  CampaignResult result;
  result.config = config;
  result.version = kVersion;

  std::vector<std::optional<double>> points;
  if (config.sweep.parameter.empty()) {
    points.push_back(std::nullopt);
  } else {
    for (double v : config.sweep.values) points.push_back(v);
  }
  const Execution inner = exec == Execution::kParallel ? Execution::kSerial : exec;
  for (const auto& value : points) {
    const ExperimentConfig point_config = value ? config.at_sweep_point(*value) : config;
    point_config.validate();
    std::vector<DropResult> drops(config.drops);
    std::vector<std::exception_ptr> errors(config.drops);
    for_each_index(config.drops, exec, [&](std::size_t d) {
      try {
        drops[d] = run_drop(point_config, d, inner);
      } catch (...) {
        errors[d] = std::current_exception();
      }
    });
    for (std::size_t d = 0; d < errors.size(); ++d) {
      if (!errors[d]) continue;
      try {
        std::rethrow_exception(errors[d]);
      } catch (const std::exception& e) {
        throw std::runtime_error("drop " + std::to_string(d) + ": " + e.what());
      }
    }

    SweepPointResult point;
    point.value = value;
    std::vector<double> sum, ul, dl;
    for (const auto& d : drops) {
      point.drops.push_back({d.drop, d.report.sum_se, d.report.ul_sum_se, d.report.dl_sum_se});
      sum.push_back(d.report.sum_se);
      ul.push_back(d.report.ul_sum_se);
      dl.push_back(d.report.dl_sum_se);
      point.evaluations += d.evaluations;
    }
    point.cdf = empirical_cdf(sum);
    point.sum_se = summarize(sum);
    point.ul_se = summarize(ul);
    point.dl_se = summarize(dl);
    result.points.push_back(std::move(point));
  }
  result.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string to_csv(const CampaignResult& result) {
  const std::string& param = result.config.sweep.parameter;
  std::string out = param.empty() ? "" : param + ",";
  out += "drop,sum_se,ul_se,dl_se\n";
  for (const auto& point : result.points) {
    for (const auto& d : point.drops) {
      if (point.value) out += format_double(*point.value) + ",";
      out += std::to_string(d.drop) + "," + format_double(d.sum_se) + "," + format_double(d.ul_se) +
             "," + format_double(d.dl_se) + "\n";
    }
  }
  return out;
}

void emit_results(const CampaignResult& result, OutputFormat format, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  if (format == OutputFormat::kCsv) {
    file << to_csv(result);
  } else {
    file << campaign_to_json(result).dump(2) << "\n";
  }
  if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace dtdd
