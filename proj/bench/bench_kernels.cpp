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

// Serial reference loops against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "dtdd/harness.hpp"
#include "dtdd/scheduler.hpp"
#include "dtdd/se_montecarlo.hpp"
#include "dtdd/validation.hpp"

namespace {

dtdd::Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? dtdd::Execution::kSerial : dtdd::Execution::kParallel;
}

dtdd::Fixture medium_fixture() {
  dtdd::FixtureSpec spec;
  spec.num_aps = 8;
  spec.antennas = 4;
  spec.num_ues = 8;
  spec.tau_p = 4;
  spec.area_side_m = 500.0;
  spec.num_ul_ues = 4;
  spec.num_ul_aps = 4;
  return dtdd::random_fixture(spec, 7);
}

void BM_SignalLevelValidation(benchmark::State& state) {
  dtdd::FixtureSpec spec;
  spec.num_aps = 4;
  spec.antennas = 4;
  spec.num_ues = 6;
  spec.num_ul_ues = 3;
  spec.num_ul_aps = 2;
  const dtdd::Fixture fx = dtdd::random_fixture(spec, 3);
  for (auto _ : state) {
    auto est = dtdd::signal_level_mrc_mfp(fx.schedule, fx.scenario, fx.powers, 20000, 11, exec_of(state));
    benchmark::DoNotOptimize(est.ul_sinr.data());
  }
}
BENCHMARK(BM_SignalLevelValidation)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_MmseRzfSumSe(benchmark::State& state) {
  const dtdd::Fixture fx = medium_fixture();
  dtdd::McParams params;
  params.n_realizations = 400;
  for (auto _ : state) {
    auto r = dtdd::mc_sum_se(fx.schedule, fx.scenario, fx.powers, params, 5, exec_of(state));
    benchmark::DoNotOptimize(r.sum_se);
  }
}
BENCHMARK(BM_MmseRzfSumSe)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_ExhaustiveTrueSumSe(benchmark::State& state) {
  const dtdd::Fixture fx = medium_fixture();
  const auto ctx = dtdd::make_context(fx.scenario, fx.powers, fx.schedule.ue_ul, fx.schedule.ue_dl);
  for (auto _ : state) {
    auto r = dtdd::exhaustive_schedule(ctx, dtdd::SearchMetric::kTrueSumSe, exec_of(state));
    benchmark::DoNotOptimize(r.objective_value);
  }
}
BENCHMARK(BM_ExhaustiveTrueSumSe)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_GreedySchedule(benchmark::State& state) {
  const dtdd::Fixture fx = medium_fixture();
  const auto ctx = dtdd::make_context(fx.scenario, fx.powers, fx.schedule.ue_ul, fx.schedule.ue_dl);
  for (auto _ : state) {
    auto r = dtdd::greedy_schedule(ctx);
    benchmark::DoNotOptimize(r.objective_value);
  }
}
BENCHMARK(BM_GreedySchedule)->Unit(benchmark::kMicrosecond);

void BM_Campaign(benchmark::State& state) {
  dtdd::ExperimentConfig config;
  config.drops = 16;
  for (auto _ : state) {
    auto r = dtdd::run_campaign(config, exec_of(state));
    benchmark::DoNotOptimize(r.points.data());
  }
}
BENCHMARK(BM_Campaign)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
