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

// Command-line front end: campaigns, closed-form validation, submodularity
// audits and exhaustive-search comparisons.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dtdd/harness.hpp"
#include "dtdd/parallel.hpp"
#include "dtdd/scheduler.hpp"
#include "dtdd/serialization.hpp"
#include "dtdd/validation.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::uint64_t seed = 1;
  bool seed_set = false;
  std::size_t drops = 0;
  std::string out_dir;
  std::string format = "csv";
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&o](std::uint64_t s) { o.seed = s; o.seed_set = true; }, "master seed");
  cmd->add_option("--drops", o.drops, "number of drops / instances")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", o.threads, "OpenMP threads (0 keeps the runtime default)")
      ->check(CLI::NonNegativeNumber);
}

std::string out_path(const CommonOptions& o, const std::string& stem) {
  std::filesystem::path dir = o.out_dir.empty() ? "." : o.out_dir;
  std::filesystem::create_directories(dir);
  return (dir / (stem + "." + o.format)).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw std::runtime_error("failed writing '" + path + "'");
}

int cmd_run(const CommonOptions& o) {
  if (o.config_path.empty()) throw dtdd::ConfigError("run: --config is required");
  dtdd::ExperimentConfig config = dtdd::load_config(o.config_path);
  if (o.seed_set) config.seed = o.seed;
  if (o.drops > 0) config.drops = o.drops;
  config.validate();

  const dtdd::CampaignResult result = dtdd::run_campaign(config);
  const std::string path = out_path(o, "results");
  dtdd::emit_results(result, o.format == "json" ? dtdd::OutputFormat::kJson : dtdd::OutputFormat::kCsv, path);

  std::printf("scheme=%s processing=%s drops=%zu seed=%llu (%.2f s)\n",
              dtdd::to_string(config.scheme).c_str(), dtdd::to_string(config.processing).c_str(),
              config.drops, static_cast<unsigned long long>(config.seed), result.wall_clock_s);
  for (const auto& p : result.points) {
    if (p.value) std::printf("%s=%g  ", config.sweep.parameter.c_str(), *p.value);
    std::printf("sum_se median=%.4f 90%%-likely=%.4f | ul median=%.4f | dl median=%.4f\n",
                p.sum_se.median, p.sum_se.percentile_90_likely, p.ul_se.median, p.dl_se.median);
  }
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_validate(const CommonOptions& o, std::size_t realizations, double tolerance) {
  const std::size_t fixtures = o.drops > 0 ? o.drops : 5;
  std::string csv = "fixture,ue,direction,closed_form,monte_carlo,relative_error\n";
  dtdd::Json json = dtdd::Json::array();
  bool ok = true;
  const dtdd::FixtureSpec spec = dtdd::validation_fixture_spec();
  for (std::size_t f = 0; f < fixtures; ++f) {
    const dtdd::Fixture fx = dtdd::random_fixture(spec, dtdd::drop_seed(o.seed, f));
    const auto est = dtdd::signal_level_mrc_mfp(fx.schedule, fx.scenario, fx.powers, realizations,
                                                dtdd::drop_seed(o.seed ^ 0x5eedULL, f));
    for (const auto& row : dtdd::compare_closed_form(fx.schedule, fx.scenario, fx.powers, est)) {
      const bool pass = row.relative_error <= tolerance;
      ok = ok && pass;
      std::printf("fixture %zu  UE %zu %s  closed=%.6e  mc=%.6e  rel=%.3f%% %s\n", f, row.ue,
                  row.direction == 'U' ? "UL" : "DL", row.closed_form, row.monte_carlo,
                  100.0 * row.relative_error, pass ? "" : "FAIL");
      char line[256];
      std::snprintf(line, sizeof(line), "%zu,%zu,%s,%.17g,%.17g,%.17g\n", f, row.ue,
                    row.direction == 'U' ? "UL" : "DL", row.closed_form, row.monte_carlo, row.relative_error);
      csv += line;
      json.push_back({{"fixture", f}, {"ue", row.ue}, {"direction", row.direction == 'U' ? "UL" : "DL"},
                      {"closed_form", row.closed_form}, {"monte_carlo", row.monte_carlo},
                      {"relative_error", row.relative_error}});
    }
  }
  if (!o.out_dir.empty()) write_text(out_path(o, "validation"), o.format == "json" ? json.dump(2) + "\n" : csv);
  std::printf("%s\n", ok ? "all SINRs within tolerance" : "some SINRs outside tolerance");
  return ok ? 0 : 1;
}

dtdd::FixtureSpec spec_from_config(const CommonOptions& o, std::size_t default_aps) {
  dtdd::FixtureSpec spec;
  spec.num_aps = default_aps;
  spec.antennas = 4;
  spec.num_ues = 8;
  spec.tau_p = 3;
  spec.area_side_m = 1000.0;
  spec.ul_snr_db = spec.dl_snr_db = 10.0;
  if (!o.config_path.empty()) {
    const dtdd::ExperimentConfig c = dtdd::load_config(o.config_path);
    spec.num_aps = c.network.num_aps;
    spec.antennas = c.network.antennas_per_ap;
    spec.num_ues = c.network.num_ues;
    spec.tau_p = c.pilot.tau_p;
    spec.area_side_m = c.network.area_side_m;
    spec.ul_snr_db = c.powers.ul_snr_db;
    spec.dl_snr_db = c.powers.dl_snr_db;
    spec.pilot_snr_db = c.pilot.pilot_snr_db;
    spec.cli_residual_db = c.network.cli_residual_db;
    spec.num_ul_ues = static_cast<std::size_t>(std::lround(c.demand * static_cast<double>(c.network.num_ues)));
  } else {
    spec.num_ul_ues = spec.num_ues / 2;
  }
  spec.num_ul_aps = spec.num_aps / 2;
  return spec;
}

int cmd_audit(const CommonOptions& o, std::size_t trials) {
  const dtdd::FixtureSpec spec = spec_from_config(o, 6);
  const std::size_t instances = o.drops > 0 ? o.drops : 10;
  dtdd::AuditReport total;
  for (std::size_t i = 0; i < instances; ++i) {
    const dtdd::Fixture fx = dtdd::random_fixture(spec, dtdd::drop_seed(o.seed, i));
    const auto ctx = dtdd::make_context(fx.scenario, fx.powers, fx.schedule.ue_ul, fx.schedule.ue_dl);
    dtdd::Rng rng = dtdd::make_stream(dtdd::drop_seed(o.seed, i), 4);
    const auto r = dtdd::submodularity_audit(ctx, trials, rng);
    total.trials += r.trials;
    total.evaluated += r.evaluated;
    total.clamped += r.clamped;
    total.submodularity_violations += r.submodularity_violations;
    total.monotonicity_violations += r.monotonicity_violations;
    total.worst_relative_violation = std::max(total.worst_relative_violation, r.worst_relative_violation);
  }
  std::printf("instances=%zu trials=%zu evaluated=%zu clamped=%zu\n", instances, total.trials,
              total.evaluated, total.clamped);
  std::printf("submodularity violations=%zu (worst relative %.3e)\n", total.submodularity_violations,
              total.worst_relative_violation);
  std::printf("monotonicity violations=%zu\n", total.monotonicity_violations);
  if (!o.out_dir.empty()) {
    const dtdd::Json j = {{"instances", instances},
                          {"trials", total.trials},
                          {"evaluated", total.evaluated},
                          {"clamped", total.clamped},
                          {"submodularity_violations", total.submodularity_violations},
                          {"monotonicity_violations", total.monotonicity_violations},
                          {"worst_relative_violation", total.worst_relative_violation}};
    std::string csv = "instances,trials,evaluated,clamped,submodularity_violations,monotonicity_violations\n";
    csv += std::to_string(instances) + "," + std::to_string(total.trials) + "," +
           std::to_string(total.evaluated) + "," + std::to_string(total.clamped) + "," +
           std::to_string(total.submodularity_violations) + "," +
           std::to_string(total.monotonicity_violations) + "\n";
    write_text(out_path(o, "audit"), o.format == "json" ? j.dump(2) + "\n" : csv);
  }
  return 0;
}

int cmd_oracle(const CommonOptions& o) {
  const dtdd::FixtureSpec spec = spec_from_config(o, 8);
  const std::size_t instances = o.drops > 0 ? o.drops : 10;
  std::string csv = "instance,greedy_sum_se,exhaustive_sum_se,ratio,greedy_evaluations,exhaustive_evaluations\n";
  dtdd::Json json = dtdd::Json::array();
  for (std::size_t i = 0; i < instances; ++i) {
    const dtdd::Fixture fx = dtdd::random_fixture(spec, dtdd::drop_seed(o.seed, i));
    const auto ctx = dtdd::make_context(fx.scenario, fx.powers, fx.schedule.ue_ul, fx.schedule.ue_dl);
    const auto greedy = dtdd::greedy_schedule(ctx);
    const auto best = dtdd::exhaustive_schedule(ctx, dtdd::SearchMetric::kTrueSumSe);
    const double g = dtdd::sum_se(greedy.schedule, fx.scenario, fx.powers).sum_se;
    const double ratio = best.objective_value > 0 ? g / best.objective_value : 1.0;
    std::printf("instance %zu  greedy=%.4f  exhaustive=%.4f  ratio=%.4f  evaluations %zu vs %zu\n", i, g,
                best.objective_value, ratio, greedy.evaluations, best.evaluations);
    char line[256];
    std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g,%.17g,%zu,%zu\n", i, g, best.objective_value, ratio,
                  greedy.evaluations, best.evaluations);
    csv += line;
    json.push_back({{"instance", i}, {"greedy_sum_se", g}, {"exhaustive_sum_se", best.objective_value},
                    {"ratio", ratio}, {"greedy_schedule", dtdd::schedule_to_json(greedy.schedule, spec.num_aps)},
                    {"exhaustive_schedule", dtdd::schedule_to_json(best.schedule, spec.num_aps)}});
  }
  if (!o.out_dir.empty()) write_text(out_path(o, "oracle"), o.format == "json" ? json.dump(2) + "\n" : csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic-TDD cell-free massive MIMO simulator"};
  app.require_subcommand(1);

  CommonOptions run_opts, validate_opts, audit_opts, oracle_opts;
  auto* run = app.add_subcommand("run", "run a campaign from a config file");
  add_common(run, run_opts);

  auto* validate = app.add_subcommand("validate", "closed-form SINRs against signal-level Monte-Carlo");
  add_common(validate, validate_opts);
  std::size_t realizations = 100000;
  double tolerance = 0.02;
  validate->add_option("--realizations", realizations, "channel realizations per fixture")
      ->check(CLI::PositiveNumber);
  validate->add_option("--tolerance", tolerance, "relative tolerance");

  auto* audit = app.add_subcommand("audit", "submodularity and monotonicity audit of the surrogate");
  add_common(audit, audit_opts);
  std::size_t trials = 2000;
  audit->add_option("--trials", trials, "nested-set samples per instance")->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle", "greedy against exhaustive scheduling on small networks");
  add_common(oracle, oracle_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    auto apply_threads = [](const CommonOptions& o) {
      if (o.threads > 0) dtdd::set_num_threads(o.threads);
    };
    if (*run) {
      apply_threads(run_opts);
      return cmd_run(run_opts);
    }
    if (*validate) {
      apply_threads(validate_opts);
      return cmd_validate(validate_opts, realizations, tolerance);
    }
    if (*audit) {
      apply_threads(audit_opts);
      return cmd_audit(audit_opts, trials);
    }
    if (*oracle) {
      apply_threads(oracle_opts);
      return cmd_oracle(oracle_opts);
    }
  } catch (const dtdd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
