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
#include <limits>

#include "doctest.h"
#include "dtdd/se_closed_form.hpp"
#include "dtdd/validation.hpp"
#include "test_support.hpp"

namespace dtdd {
namespace {

using testing::make_schedule;
using testing::scenario_at;

// Direct transcription of the MRC/MFP SINR expressions, written with plain
// loops over (m, j, n) and an explicit kappa, as an oracle for the library.
struct Oracle {
  const Scenario& s;
  const PowerConfig& p;
  const Schedule& sch;

  double kappa(std::size_t j, std::size_t n) const {
    if (!contains(sch.ap_dl, j) || !contains(sch.ue_dl, n)) return 0.0;
    double sum = 0.0;
    for (auto q : sch.ue_dl) sum += s.stats.alpha_sq(j, q);
    return sum > 0.0 ? 1.0 / (s.geometry.antennas() * sum) : 0.0;
  }
  bool shares(std::size_t a, std::size_t b) const {
    return a != b && s.assignment.pilot_of(a) == s.assignment.pilot_of(b);
  }

  double ul(std::size_t k) const {
    const auto& a2 = s.stats.alpha_sq;
    const auto& beta = s.geometry.beta;
    const auto& ep = s.pilot.pilot_power;
    const double n_ant = s.geometry.antennas();
    double sum_a = 0.0;
    for (auto m : sch.ap_ul) sum_a += a2(m, k);
    if (sum_a == 0.0) return 0.0;
    double ncoh = 0.0;
    double coh = 0.0;
    double iap = 0.0;
    for (auto n : sch.ue_ul) {
      for (auto m : sch.ap_ul) ncoh += p.ul_power[n] * a2(m, k) * beta(m, n);
      if (shares(n, k)) {
        double inner = 0.0;
        for (auto m : sch.ap_ul) inner += a2(m, k) * std::sqrt(ep[n] / ep[k]) * beta(m, n) / beta(m, k);
        coh += n_ant * p.ul_power[n] * inner * inner;
      }
    }
    for (auto m : sch.ap_ul) {
      for (auto j : sch.ap_dl) {
        for (auto n : sch.ue_dl) {
          iap += n_ant * kappa(j, n) * kappa(j, n) * s.geometry.zeta(m, j) * a2(m, k) * a2(j, n) * p.dl_power[j];
        }
      }
    }
    return n_ant * p.ul_power[k] * sum_a * sum_a / (ncoh + coh + iap + s.geometry.noise() * sum_a);
  }

  double dl(std::size_t n) const {
    const auto& a2 = s.stats.alpha_sq;
    const auto& beta = s.geometry.beta;
    const auto& ep = s.pilot.pilot_power;
    const double n_ant = s.geometry.antennas();
    double amp = 0.0;
    for (auto j : sch.ap_dl) amp += kappa(j, n) * std::sqrt(p.dl_power[j]) * a2(j, n);
    if (amp == 0.0) return 0.0;
    double ncoh = 0.0;
    double coh = 0.0;
    double iu = 0.0;
    for (auto q : sch.ue_dl) {
      for (auto j : sch.ap_dl) ncoh += n_ant * p.dl_power[j] * kappa(j, q) * kappa(j, q) * beta(j, n) * a2(j, q);
      if (shares(q, n)) {
        double inner = 0.0;
        for (auto j : sch.ap_dl) {
          inner += std::sqrt(p.dl_power[j]) * kappa(j, q) * a2(j, q) * std::sqrt(ep[n] / ep[q]) * beta(j, n) / beta(j, q);
        }
        coh += n_ant * n_ant * inner * inner;
      }
    }
    for (auto k : sch.ue_ul) iu += p.ul_power[k] * s.geometry.epsilon(n, k);
    return n_ant * n_ant * amp * amp / (ncoh + coh + iu + s.geometry.noise());
  }
};

Fixture fixture(std::uint64_t seed, std::size_t tau_p = 2) {
  FixtureSpec spec;
  spec.num_aps = 5;
  spec.antennas = 3;
  spec.num_ues = 7;
  spec.tau_p = tau_p;
  spec.num_ul_ues = 3;
  spec.num_ul_aps = 2;
  spec.area_side_m = 300.0;
  Fixture f = random_fixture(spec, seed);
  // Unequal powers exercise every per-node index in the formulas.
  for (std::size_t k = 0; k < 7; ++k) {
    f.powers.ul_power[k] *= 1.0 + 0.3 * k;
    f.scenario.pilot.pilot_power[k] *= 1.0 + 0.2 * ((k * 3) % 5);
  }
  for (std::size_t m = 0; m < 5; ++m) f.powers.dl_power[m] *= 1.0 + 0.5 * m;
  f.scenario = Scenario::make(f.scenario.geometry, f.scenario.pilot, f.scenario.assignment);
  return f;
}

TEST_SUITE("se_closed_form") {

TEST_CASE("single-link uplink") {
  NetworkConfig cfg;
  cfg.noise_power = 1.0;
  const auto s = scenario_at({{0, 0}}, {{3, 4}}, 1, 1, {0}, 1.0, cfg);
  REQUIRE(s.stats.alpha_sq(0, 0) == 0.5);
  const auto p = PowerConfig::uniform(1, 1, 1.0, 1.0);
  const auto sch = make_schedule({0}, {}, {0}, {});
  const RealMatrix kappa = dl_power_coeffs(s.stats, sch, 1);
  CHECK(ul_sinr_mrc(0, sch, s, p, kappa) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("power coefficients") {
  EstimationStats st;
  st.alpha_sq = RealMatrix::Constant(1, 1, 0.5);
  auto kappa = dl_power_coeffs(st, make_schedule({}, {0}, {}, {0}), 4);
  CHECK(kappa(0, 0) == 0.5);

  st.alpha_sq = RealMatrix(1, 2);
  st.alpha_sq << 0.2, 0.3;
  kappa = dl_power_coeffs(st, make_schedule({}, {0}, {}, {0, 1}), 2);
  CHECK(kappa(0, 0) == doctest::Approx(1.0));
  CHECK(kappa(0, 1) == doctest::Approx(1.0));

  kappa = dl_power_coeffs(st, make_schedule({}, {0}, {0, 1}, {}), 2);
  CHECK(kappa.isZero(0.0));
}

TEST_CASE("normalisation identity") {
  const Fixture f = fixture(3);
  const auto& sch = f.schedule;
  const RealMatrix kappa = dl_power_coeffs(f.scenario.stats, sch, f.scenario.geometry.antennas());
  for (auto j : sch.ap_dl) {
    double total = 0.0;
    for (auto n : sch.ue_dl) total += kappa(j, n) * f.scenario.geometry.antennas() * f.scenario.stats.alpha_sq(j, n);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (auto m : sch.ap_ul) CHECK(kappa.row(m).isZero(0.0));
}

TEST_CASE("matches the transcribed expressions") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    for (std::size_t tau_p : {1, 2, 7}) {
      const Fixture f = fixture(seed, tau_p);
      const Oracle o{f.scenario, f.powers, f.schedule};
      const SEReport r = sum_se(f.schedule, f.scenario, f.powers);
      double ul_total = 0.0;
      double dl_total = 0.0;
      for (auto k : f.schedule.ue_ul) {
        CHECK(r.ul_sinr[k] == doctest::Approx(o.ul(k)).epsilon(1e-11));
        ul_total += std::log2(1.0 + o.ul(k));
      }
      for (auto n : f.schedule.ue_dl) {
        CHECK(r.dl_sinr[n] == doctest::Approx(o.dl(n)).epsilon(1e-11));
        dl_total += std::log2(1.0 + o.dl(n));
      }
      const double prelog = (200.0 - tau_p) / 200.0;
      CHECK(r.ul_sum_se == doctest::Approx(prelog * ul_total).epsilon(1e-11));
      CHECK(r.dl_sum_se == doctest::Approx(prelog * dl_total).epsilon(1e-11));
    }
  }
}

TEST_CASE("empty serving sets") {
  const Fixture f = fixture(1);
  Schedule s = f.schedule;
  s.ap_dl.insert(s.ap_dl.end(), s.ap_ul.begin(), s.ap_ul.end());
  std::sort(s.ap_dl.begin(), s.ap_dl.end());
  s.ap_ul.clear();
  SEReport r = sum_se(s, f.scenario, f.powers);
  for (auto k : s.ue_ul) CHECK(r.ul_sinr[k] == 0.0);
  CHECK(r.ul_sum_se == 0.0);
  CHECK(r.dl_sum_se > 0.0);

  s = f.schedule;
  s.ap_ul.insert(s.ap_ul.end(), s.ap_dl.begin(), s.ap_dl.end());
  std::sort(s.ap_ul.begin(), s.ap_ul.end());
  s.ap_dl.clear();
  r = sum_se(s, f.scenario, f.powers);
  CHECK(r.dl_sum_se == 0.0);
  CHECK(r.ul_sum_se > 0.0);
}

TEST_CASE("no uplink users means no UE-UE interference") {
  const Fixture f = fixture(2);
  Schedule s = f.schedule;
  split_demand(s, 7, 0);
  const RealMatrix kappa = dl_power_coeffs(f.scenario.stats, s, f.scenario.geometry.antennas());
  for (auto n : s.ue_dl) CHECK(dl_terms_mfp(n, s, f.scenario, f.powers, kappa).cross_link == 0.0);
}

TEST_CASE("SINRs are invariant to a common power scaling") {
  const Fixture f = fixture(5);
  const SEReport base = sum_se(f.schedule, f.scenario, f.powers);
  for (double t : {1e-3, 7.0, 1e4}) {
    NetworkGeometry g = f.scenario.geometry;
    g.config.noise_power *= t;
    PilotConfig pilot = f.scenario.pilot;
    for (auto& e : pilot.pilot_power) e *= t;
    PowerConfig p = f.powers;
    for (auto& e : p.ul_power) e *= t;
    for (auto& e : p.dl_power) e *= t;
    const SEReport scaled = sum_se(f.schedule, Scenario::make(g, pilot, f.scenario.assignment), p);
    for (std::size_t k = 0; k < 7; ++k) {
      CHECK(scaled.ul_sinr[k] == doctest::Approx(base.ul_sinr[k]).epsilon(1e-10));
      CHECK(scaled.dl_sinr[k] == doctest::Approx(base.dl_sinr[k]).epsilon(1e-10));
    }
  }
}

TEST_CASE("disabling AP-AP interference deletes exactly that term") {
  const Fixture f = fixture(6);
  NetworkGeometry g = f.scenario.geometry;
  g.zeta.setZero();
  const Scenario quiet = Scenario::make(g, f.scenario.pilot, f.scenario.assignment);
  const RealMatrix kappa = dl_power_coeffs(f.scenario.stats, f.schedule, g.antennas());
  for (auto k : f.schedule.ue_ul) {
    const SinrTerms full = ul_terms_mrc(k, f.schedule, f.scenario, f.powers, kappa);
    CHECK(full.cross_link > 0.0);
    const double manual = full.signal / (full.noncoherent + full.coherent + full.noise);
    CHECK(ul_sinr_mrc(k, f.schedule, quiet, f.powers, kappa) == doctest::Approx(manual).epsilon(1e-13));
  }
}

TEST_CASE("orthogonal pilots carry no coherent interference") {
  const Fixture f = fixture(7, 7);
  const RealMatrix kappa = dl_power_coeffs(f.scenario.stats, f.schedule, f.scenario.geometry.antennas());
  for (auto k : f.schedule.ue_ul) CHECK(ul_terms_mrc(k, f.schedule, f.scenario, f.powers, kappa).coherent == 0.0);
  for (auto n : f.schedule.ue_dl) CHECK(dl_terms_mfp(n, f.schedule, f.scenario, f.powers, kappa).coherent == 0.0);
}

TEST_CASE("report composition") {
  const SEReport r = compose_report({0.0, 3.0, 0.0}, {1.0, 0.0, 7.0}, 0.5);
  CHECK(r.ul_se == std::vector<double>{0.0, 2.0, 0.0});
  CHECK(r.dl_se == std::vector<double>{1.0, 0.0, 3.0});
  CHECK(r.ul_sum_se == 1.0);
  CHECK(r.dl_sum_se == 2.0);
  CHECK(r.sum_se == 3.0);

  const SEReport zero = compose_report({0.0, 0.0}, {0.0, 0.0}, 0.9);
  CHECK(zero.sum_se == 0.0);
  CHECK(compose_report({5.0}, {9.0}, 0.0).sum_se == 0.0);
}

TEST_CASE("pilot-only slot has no data") {
  const auto s = scenario_at({{0, 0}, {100, 0}}, {{10, 0}, {90, 0}}, 2, 2, {0, 1}, 10.0);
  Scenario full = s;
  full.pilot.tau = 2;
  CHECK(full.prelog() == 0.0);
  const auto r = sum_se(make_schedule({0}, {1}, {0}, {1}), full, PowerConfig::uniform(2, 2, 10.0, 10.0));
  CHECK(r.ul_sinr[0] > 0.0);
  CHECK(r.sum_se == 0.0);
}

TEST_CASE("schedule validation") {
  CHECK_NOTHROW(make_schedule({0}, {1}, {0}, {1}).validate(2, 2));
  CHECK_THROWS_AS(make_schedule({0}, {0}, {0}, {1}).validate(2, 2), ConfigError);
  CHECK_THROWS_AS(make_schedule({2}, {}, {0}, {1}).validate(2, 2), ConfigError);
  CHECK_THROWS_AS(make_schedule({1, 0}, {}, {0}, {1}).validate(2, 2), ConfigError);
  CHECK_THROWS_AS(make_schedule({0}, {1}, {0}, {}).validate(2, 2), ConfigError);
  CHECK_THROWS_AS(make_schedule({0}, {1}, {0, 1}, {1}).validate(2, 2), ConfigError);
  CHECK(make_schedule({1}, {0}, {}, {}).ap_modes(3) == std::vector<char>{'D', 'U', '-'});
}

TEST_CASE("signal-level simulation agrees with the closed form") {
  const Fixture f = random_fixture(validation_fixture_spec(), 11);
  const auto est = signal_level_mrc_mfp(f.schedule, f.scenario, f.powers, 20000, 11);
  for (const auto& row : compare_closed_form(f.schedule, f.scenario, f.powers, est)) {
    CAPTURE(row.ue);
    CAPTURE(row.direction);
    CHECK(row.relative_error < 0.06);
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace dtdd
