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


#include <cmath>
#include <complex>

#include "doctest.h"
#include "dtdd/estimation.hpp"
#include "dtdd/geometry.hpp"
#include "test_support.hpp"

namespace dtdd {
namespace {

NetworkGeometry colocated(std::size_t num_ues, double noise) {
  NetworkConfig cfg;
  cfg.noise_power = noise;
  return geometry_from_positions(cfg, {{0, 0}}, std::vector<Point2>(num_ues, Point2{3, 4}));
}

// Textbook LMMSE statistics written out per pair, independent of the
// library's grouped accumulation.
void check_against_reference(const NetworkGeometry& g, const PilotConfig& pilot,
                             const PilotAssignment& assignment) {
  const auto s = estimation_stats(g, pilot, assignment);
  const double tp = static_cast<double>(pilot.tau_p);
  for (std::size_t m = 0; m < g.num_aps(); ++m) {
    for (std::size_t k = 0; k < g.num_ues(); ++k) {
      double denom = tp * pilot.pilot_power[k] * g.beta(m, k) + g.noise();
      for (std::size_t n = 0; n < g.num_ues(); ++n) {
        if (n != k && assignment.pilot_of(n) == assignment.pilot_of(k)) {
          denom += tp * pilot.pilot_power[n] * g.beta(m, n);
        }
      }
      const double a2 = tp * pilot.pilot_power[k] * g.beta(m, k) * g.beta(m, k) / denom;
      CHECK(s.c(m, k) == doctest::Approx(1.0 / denom).epsilon(1e-12));
      CHECK(s.alpha_sq(m, k) == doctest::Approx(a2).epsilon(1e-12));
      CHECK(s.alpha_bar_sq(m, k) == doctest::Approx(g.beta(m, k) - a2).epsilon(1e-12));
    }
  }
}

TEST_SUITE("estimation") {

TEST_CASE("single UE, unit pilot energy") {
  const auto g = colocated(1, 1.0);
  const auto s = estimation_stats(g, PilotConfig::uniform(200, 1, 1, 1.0), PilotAssignment(1, {0}));
  CHECK(s.c(0, 0) == 0.5);
  CHECK(s.alpha_sq(0, 0) == 0.5);
  CHECK(s.alpha_bar_sq(0, 0) == 0.5);
}

TEST_CASE("noiseless orthogonal pilots give perfect estimates") {
  NetworkConfig cfg;
  cfg.noise_power = 0.0;
  const auto g = geometry_from_positions(cfg, {{0, 0}, {500, 0}}, {{50, 0}, {300, 40}});
  const auto s = estimation_stats(g, PilotConfig::uniform(200, 2, 2, 3.0), PilotAssignment::orthogonal(2));
  for (Eigen::Index m = 0; m < 2; ++m) {
    for (Eigen::Index k = 0; k < 2; ++k) {
      CHECK(s.alpha_sq(m, k) == doctest::Approx(g.beta(m, k)).epsilon(1e-14));
      CHECK(s.alpha_bar_sq(m, k) == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("two co-located UEs sharing a pilot split the estimate") {
  const auto g = colocated(2, 0.0);
  const auto s = estimation_stats(g, PilotConfig::uniform(200, 1, 2, 1.0), PilotAssignment(1, {0, 0}));
  CHECK(s.alpha_sq(0, 0) == 0.5);
  CHECK(s.alpha_sq(0, 1) == 0.5);
}

TEST_CASE("orthogonal pilots approach the channel gain at high pilot power") {
  Rng rng = make_stream(5, 0);
  NetworkConfig cfg;
  cfg.num_aps = 3;
  cfg.num_ues = 3;
  const auto g = build_geometry(cfg, rng);
  const auto s = estimation_stats(g, PilotConfig::uniform(200, 3, 3, 1e14), PilotAssignment::orthogonal(3));
  for (Eigen::Index m = 0; m < 3; ++m) {
    for (Eigen::Index k = 0; k < 3; ++k) {
      CHECK(s.alpha_sq(m, k) == doctest::Approx(g.beta(m, k)).epsilon(1e-3));
    }
  }
}

TEST_CASE("statistics match the per-pair reference") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng = make_stream(seed, 0);
    NetworkConfig cfg;
    cfg.num_aps = 4;
    cfg.num_ues = 9;
    cfg.area_side_m = 300.0;
    const auto g = build_geometry(cfg, rng);
    PilotConfig pilot = PilotConfig::uniform(200, 3, 9, 50.0);
    for (std::size_t k = 0; k < 9; ++k) pilot.pilot_power[k] = 10.0 + 7.0 * k;
    Rng prng = make_stream(seed, 1);
    std::vector<std::size_t> labels(9);
    for (auto& l : labels) l = prng() % 3;
    check_against_reference(g, pilot, PilotAssignment(3, labels));
  }
}

TEST_CASE("contamination monotonicity") {
  const std::vector<Point2> aps{{0, 0}};
  const PilotConfig pilot = PilotConfig::uniform(200, 1, 2, 100.0);
  const PilotAssignment shared(1, {0, 0});
  double previous = std::numeric_limits<double>::infinity();
  for (double x : {400.0, 200.0, 100.0, 50.0, 20.0, 5.0}) {
    const auto g = geometry_from_positions({}, aps, {{30, 0}, {x, 0}});
    const double a2 = estimation_stats(g, pilot, shared).alpha_sq(0, 0);
    CHECK(a2 <= previous);
    previous = a2;
  }
}

TEST_CASE("link_alpha_sq agrees with the full matrix") {
  Rng rng = make_stream(9, 0);
  NetworkConfig cfg;
  cfg.num_aps = 3;
  cfg.num_ues = 6;
  const auto g = build_geometry(cfg, rng);
  const auto pilot = PilotConfig::uniform(200, 2, 6, 100.0);
  const PilotAssignment a(2, {0, 1, 0, 1, 1, 0});
  const auto s = estimation_stats(g, pilot, a);
  for (std::size_t m = 0; m < 3; ++m) {
    for (std::size_t k = 0; k < 6; ++k) {
      CHECK(link_alpha_sq(g, pilot, a, m, k) == doctest::Approx(s.alpha_sq(m, k)).epsilon(1e-13));
    }
  }
}

TEST_CASE("assignment validation") {
  CHECK_THROWS_AS(PilotAssignment(2, {0, 2}), ConfigError);
  CHECK_THROWS_AS(PilotAssignment(0, {}), ConfigError);
  PilotAssignment a(2, {0, 1, 0});
  CHECK(a.groups() == std::vector<IndexSet>{{0, 2}, {1}});
  CHECK(a.group(1) == IndexSet{1});
  a.move(1, 0);
  CHECK(a.group(0) == IndexSet{0, 1, 2});
  CHECK_THROWS(a.move(0, 2));

  const auto g = colocated(3, 1.0);
  CHECK_THROWS_AS(estimation_stats(g, PilotConfig::uniform(200, 1, 3, 1.0), a), ConfigError);
  CHECK_THROWS_AS(PilotConfig::uniform(4, 5, 3, 1.0).validate(3), ConfigError);
  CHECK_THROWS_AS(PilotConfig::uniform(200, 2, 3, 0.0).validate(3), ConfigError);
}

TEST_CASE("perfect CSI realizations return the true channel") {
  NetworkConfig cfg;
  cfg.noise_power = 0.0;
  cfg.antennas_per_ap = 3;
  const auto g = geometry_from_positions(cfg, {{0, 0}, {200, 0}}, {{40, 0}, {150, 30}});
  const auto pilot = PilotConfig::uniform(200, 2, 2, 1.0);
  const auto a = PilotAssignment::orthogonal(2);
  const auto s = estimation_stats(g, pilot, a);
  Rng rng = make_stream(1, 2);
  const auto r = draw_channel_block(g, pilot, a, s, rng);
  for (std::size_t m = 0; m < 2; ++m) {
    CHECK((r.estimate[m] - r.channel[m]).norm() <= 1e-12 * r.channel[m].norm());
  }
}

TEST_CASE("realizations are seeded") {
  const auto g = colocated(2, 1.0);
  const auto pilot = PilotConfig::uniform(200, 1, 2, 1.0);
  const PilotAssignment a(1, {0, 0});
  const auto s = estimation_stats(g, pilot, a);
  Rng r1 = make_stream(4, 2, 17);
  Rng r2 = make_stream(4, 2, 17);
  const auto x = draw_channel_block(g, pilot, a, s, r1, {true, true});
  const auto y = draw_channel_block(g, pilot, a, s, r2, {true, true});
  CHECK(x.channel[0] == y.channel[0]);
  CHECK(x.estimate[0] == y.estimate[0]);
  CHECK(x.ue_ue == y.ue_ue);
}

TEST_CASE("co-pilot estimates are collinear") {
  NetworkConfig cfg;
  cfg.antennas_per_ap = 4;
  const auto g = geometry_from_positions(cfg, {{0, 0}, {300, 0}}, {{20, 0}, {250, 10}, {80, 80}});
  PilotConfig pilot = PilotConfig::uniform(200, 2, 3, 100.0);
  pilot.pilot_power[1] = 40.0;
  const PilotAssignment a(2, {0, 0, 1});
  const auto s = estimation_stats(g, pilot, a);
  Rng rng = make_stream(2, 2);
  const auto r = draw_channel_block(g, pilot, a, s, rng);
  for (std::size_t m = 0; m < 2; ++m) {
    const double scale = std::sqrt(pilot.pilot_power[0] / pilot.pilot_power[1]) * g.beta(m, 0) / g.beta(m, 1);
    const ComplexMatrix diff = r.estimate[m].col(0) - scale * r.estimate[m].col(1);
    CHECK(diff.norm() <= 1e-10 * r.estimate[m].col(0).norm());
  }
}

// The explicit pilot-phase draw must have the same second-order statistics
// as drawing estimate and error independently with variances alpha^2 and
// alpha_bar^2.
TEST_CASE("pilot-phase draws match the independent-marginal model") {
  NetworkConfig cfg;
  cfg.antennas_per_ap = 2;
  const auto g = geometry_from_positions(cfg, {{0, 0}, {60, 0}}, {{5, 0}, {40, 5}, {15, 12}});
  const auto pilot = PilotConfig::uniform(200, 2, 3, 2.0);
  const PilotAssignment a(2, {0, 1, 0});
  const auto s = estimation_stats(g, pilot, a);

  constexpr int kDraws = 100000;
  RealMatrix est_var = RealMatrix::Zero(2, 3);
  RealMatrix err_var = RealMatrix::Zero(2, 3);
  RealMatrix true_var = RealMatrix::Zero(2, 3);
  RealMatrix cross = RealMatrix::Zero(2, 3);
  // Independent-marginal reference, drawn by the test.
  RealMatrix ref_est = RealMatrix::Zero(2, 3);
  RealMatrix ref_true = RealMatrix::Zero(2, 3);
  Rng ref_rng = make_stream(77, 9);
  for (int d = 0; d < kDraws; ++d) {
    Rng rng = make_stream(77, 2, d);
    const auto r = draw_channel_block(g, pilot, a, s, rng);
    for (std::size_t m = 0; m < 2; ++m) {
      for (std::size_t k = 0; k < 3; ++k) {
        const Complex fh = r.estimate[m](0, k);
        const Complex fe = r.channel[m](0, k) - fh;
        est_var(m, k) += std::norm(fh);
        err_var(m, k) += std::norm(fe);
        true_var(m, k) += std::norm(r.channel[m](0, k));
        cross(m, k) += std::real(fh * std::conj(fe));
        const Complex e = draw_cn(ref_rng, s.alpha_sq(m, k));
        const Complex n = draw_cn(ref_rng, s.alpha_bar_sq(m, k));
        ref_est(m, k) += std::norm(e);
        ref_true(m, k) += std::norm(e + n);
      }
    }
  }
  for (Eigen::Index m = 0; m < 2; ++m) {
    for (Eigen::Index k = 0; k < 3; ++k) {
      const double a2 = s.alpha_sq(m, k);
      const double e2 = s.alpha_bar_sq(m, k);
      CAPTURE(m);
      CAPTURE(k);
      CHECK(est_var(m, k) / kDraws == doctest::Approx(a2).epsilon(0.05));
      CHECK(true_var(m, k) / kDraws == doctest::Approx(g.beta(m, k)).epsilon(0.05));
      if (e2 > 0.05 * g.beta(m, k)) CHECK(err_var(m, k) / kDraws == doctest::Approx(e2).epsilon(0.05));
      CHECK(std::abs(cross(m, k) / kDraws) <= 0.02 * std::sqrt(a2 * g.beta(m, k)));
      CHECK(est_var(m, k) / ref_est(m, k) == doctest::Approx(1.0).epsilon(0.05));
      CHECK(true_var(m, k) / ref_true(m, k) == doctest::Approx(1.0).epsilon(0.05));
    }
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace dtdd
