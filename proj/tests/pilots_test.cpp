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


#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "dtdd/geometry.hpp"
#include "dtdd/pilots.hpp"

namespace dtdd {
namespace {

TEST_SUITE("pilots") {

TEST_CASE("random assignment special cases") {
  Rng rng = make_stream(1, 1);
  CHECK(random_assignment(6, 6, rng) == PilotAssignment::orthogonal(6));
  const auto single = random_assignment(5, 1, rng);
  CHECK(single.labels() == std::vector<std::size_t>(5, 0));
}

TEST_CASE("random assignment is seeded") {
  Rng a = make_stream(42, 1);
  Rng b = make_stream(42, 1);
  const auto x = random_assignment(100, 25, a);
  const auto y = random_assignment(100, 25, b);
  CHECK(x == y);
  std::size_t total = 0;
  for (const auto& grp : x.groups()) total += grp.size();
  CHECK(total == 100);
  CHECK(x.num_pilots() == 25);
  for (auto l : x.labels()) CHECK(l < 25);
}

TEST_CASE("cell centres") {
  const auto c = cell_centers(4, 1000.0);
  CHECK(c == std::vector<Point2>{{250, 250}, {750, 250}, {250, 750}, {750, 750}});
  CHECK_THROWS_AS(cell_centers(8, 1000.0), ConfigError);
  CHECK_THROWS_AS(cell_centers(0, 1000.0), ConfigError);
}

TEST_CASE("cellular assignment separates UEs of one cell") {
  const std::vector<Point2> ues{{100, 100}, {200, 300}, {900, 100}, {600, 400},
                                {100, 900}, {300, 600}, {700, 700}, {950, 950}};
  const auto g = geometry_from_positions({}, {{500, 500}}, ues);
  const auto r = cellular_assignment(g, 2, 4);
  CHECK(r.effective_tau_p == 2);
  CHECK(r.cell_of_ue == std::vector<std::size_t>{0, 0, 1, 1, 2, 2, 3, 3});
  for (std::size_t a = 0; a < ues.size(); ++a) {
    for (std::size_t b = a + 1; b < ues.size(); ++b) {
      if (r.cell_of_ue[a] == r.cell_of_ue[b]) CHECK(r.assignment.pilot_of(a) != r.assignment.pilot_of(b));
    }
  }
}

TEST_CASE("one cell is round-robin over all UEs") {
  Rng rng = make_stream(3, 0);
  NetworkConfig cfg;
  cfg.num_ues = 7;
  const auto g = build_geometry(cfg, rng);
  const auto r = cellular_assignment(g, 3, 1);
  CHECK(r.effective_tau_p == 7);
  CHECK(r.assignment == PilotAssignment::orthogonal(7));
}

TEST_CASE("crowded cells raise the pilot length to the largest cluster") {
  Rng rng = make_stream(2026, 0);
  NetworkConfig cfg;
  cfg.num_ues = 100;
  const auto g = build_geometry(cfg, rng);
  const auto r = cellular_assignment(g, 25, 4);

  // Quadrant counts computed independently of the library.
  std::map<int, std::size_t> counts;
  for (const auto& p : g.ue_positions) ++counts[(p.x >= 500.0 ? 1 : 0) + (p.y >= 500.0 ? 2 : 0)];
  std::size_t largest = 0;
  for (const auto& [cell, n] : counts) largest = std::max(largest, n);
  CHECK(r.effective_tau_p == std::max<std::size_t>(25, largest));
  CHECK(r.assignment.num_pilots() == r.effective_tau_p);
  std::set<std::pair<std::size_t, std::size_t>> used;
  for (std::size_t k = 0; k < 100; ++k) {
    CHECK(used.insert({r.cell_of_ue[k], r.assignment.pilot_of(k)}).second);
  }
}

TEST_CASE("iterative allocation leaves orthogonal pilots alone") {
  Rng rng = make_stream(8, 0);
  NetworkConfig cfg;
  cfg.num_ues = 5;
  const auto g = build_geometry(cfg, rng);
  const auto pilot = PilotConfig::uniform(200, 5, 5, 100.0);
  const auto r = iterative_allocation(g, pilot, PilotAssignment::orthogonal(5));
  CHECK(r.assignment == PilotAssignment::orthogonal(5));
  CHECK(r.iterations == 0);
  CHECK(r.stop_reason == PilotStopReason::kNoImprovement);
}

TEST_CASE("iterative allocation with a single pilot") {
  const auto g = geometry_from_positions({}, {{0, 0}}, {{20, 0}, {40, 0}});
  const auto pilot = PilotConfig::uniform(200, 1, 2, 100.0);
  const PilotAssignment initial(1, {0, 0});
  const auto r = iterative_allocation(g, pilot, initial);
  CHECK(r.assignment == initial);
  CHECK(r.iterations == 0);
}

TEST_CASE("iterative allocation splits two close pairs") {
  const auto g = geometry_from_positions({}, {{0, 0}, {1000, 0}},
                                         {{15, 0}, {0, 25}, {980, 0}, {1000, 30}});
  const auto pilot = PilotConfig::uniform(200, 2, 4, 100.0);
  const PilotAssignment initial(2, {0, 0, 1, 1});
  const auto r = iterative_allocation(g, pilot, initial);

  double best = 0.0;
  for (unsigned mask = 0; mask < 16; ++mask) {
    std::vector<std::size_t> labels(4);
    for (std::size_t k = 0; k < 4; ++k) labels[k] = (mask >> k) & 1u;
    best = std::max(best, min_nearest_alpha(g, pilot, PilotAssignment(2, labels)));
  }
  // Single moves can stop at a split that differs from the best one only
  // through contamination by the far pair (about 1e-8 relative here).
  CHECK(r.final_min_alpha() == doctest::Approx(best).epsilon(1e-6));
  CHECK(r.assignment.pilot_of(0) != r.assignment.pilot_of(1));
  CHECK(r.assignment.pilot_of(2) != r.assignment.pilot_of(3));
}

TEST_CASE("iterative allocation never lowers the minimum") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = make_stream(seed, 0);
    NetworkConfig cfg;
    cfg.num_aps = 9;
    cfg.num_ues = 12;
    const auto g = build_geometry(cfg, rng);
    const auto pilot = PilotConfig::uniform(200, 4, 12, 100.0);
    Rng prng = make_stream(seed, 1);
    const auto initial = random_assignment(12, 4, prng);
    const auto r = iterative_allocation(g, pilot, initial);
    CHECK(r.initial_min_alpha() == doctest::Approx(min_nearest_alpha(g, pilot, initial)));
    CHECK(r.final_min_alpha() == doctest::Approx(min_nearest_alpha(g, pilot, r.assignment)));
    CHECK(r.final_min_alpha() >= r.initial_min_alpha());
    CHECK(r.min_alpha_trace.size() == r.iterations + 1);
    CHECK(std::is_sorted(r.min_alpha_trace.begin(), r.min_alpha_trace.end()));
    CHECK_NOTHROW(r.assignment.validate(12));
  }
}

TEST_CASE("iteration budget and threshold") {
  Rng rng = make_stream(4, 0);
  NetworkConfig cfg;
  cfg.num_aps = 9;
  cfg.num_ues = 16;
  const auto g = build_geometry(cfg, rng);
  const auto pilot = PilotConfig::uniform(200, 4, 16, 100.0);
  Rng prng = make_stream(4, 1);
  const auto initial = random_assignment(16, 4, prng);

  PilotAllocParams params;
  params.n_iter = 1;
  auto r = iterative_allocation(g, pilot, initial, params);
  CHECK(r.iterations <= 1);
  if (r.iterations == 1) CHECK(r.stop_reason == PilotStopReason::kIterationBudget);
  params.n_iter = 0;
  CHECK_THROWS_AS(iterative_allocation(g, pilot, initial, params), ConfigError);

  params.n_iter = 100;
  params.alpha_threshold = 0.0;
  r = iterative_allocation(g, pilot, initial, params);
  CHECK(r.iterations == 0);
  CHECK(r.stop_reason == PilotStopReason::kThresholdReached);
}

}  // TEST_SUITE

}  // namespace
}  // namespace dtdd
