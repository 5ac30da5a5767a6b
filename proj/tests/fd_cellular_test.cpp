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
#include <limits>

#include "doctest.h"
#include "dtdd/fd_cellular.hpp"
#include "dtdd/geometry.hpp"

namespace dtdd {
namespace {

CellularLayout two_cells(double rho) {
  CellularLayout c;
  c.antennas = 8;
  c.noise_power = 1.0;
  c.bs_positions = {{250, 500}, {750, 500}};
  // UE 0 (UL, cell 0) and UE 1 (UL, cell 1) share pilot 0; UE 2 (DL, cell 1).
  c.cell_of_ue = {0, 1, 1};
  c.pilot_of_ue = {0, 0, 1};
  c.tau_p = 2;
  c.beta.resize(2, 3);
  c.beta << 2.0, 0.3, 0.2,
            0.4, 1.5, 1.0;
  c.rho = RealMatrix::Zero(2, 2);
  c.rho(0, 1) = rho;
  c.rho(1, 0) = rho;
  c.epsilon = RealMatrix::Zero(3, 3);
  c.epsilon(2, 0) = c.epsilon(0, 2) = 0.05;
  c.epsilon(2, 1) = c.epsilon(1, 2) = 0.3;
  return c;
}

CellularPowers powers(std::size_t cells, std::size_t ues, double pilot, double ul, double dl) {
  return {std::vector<double>(ues, pilot), std::vector<double>(ues, ul), std::vector<double>(cells, dl)};
}

TEST_SUITE("fd_cellular") {

TEST_CASE("single cell, single uplink user") {
  CellularLayout c;
  c.antennas = 6;
  c.noise_power = 1.0;
  c.bs_positions = {{500, 500}};
  c.cell_of_ue = {0};
  c.pilot_of_ue = {0};
  c.tau_p = 1;
  c.beta = RealMatrix::Constant(1, 1, 0.7);
  c.rho = RealMatrix::Zero(1, 1);
  c.epsilon = RealMatrix::Zero(1, 1);
  const double e = 3.0;
  // Very strong pilots make the estimate essentially perfect.
  const auto p = powers(1, 1, 1e15, e, 1.0);
  const SEReport r = fd_cellular_sum_se(c, p, {0}, {}, 200);
  const double sigma = cellular_sigma_sq(c, p)(0, 0);
  CHECK(sigma == doctest::Approx(0.7).epsilon(1e-12));
  // The multi-user sum keeps the user's own beamforming-uncertainty term.
  CHECK(r.ul_sinr[0] == doctest::Approx(6.0 * 0.7 * e / (0.7 * e + 1.0)).epsilon(1e-12));
}

TEST_CASE("estimate quality") {
  const CellularLayout c = two_cells(0.0);
  const auto p = powers(2, 3, 5.0, 1.0, 1.0);
  const RealMatrix s = cellular_sigma_sq(c, p);
  const double load0 = 5.0 * 2.0 + 5.0 * 0.3;  // pilot 0 at BS 0
  CHECK(s(0, 0) == doctest::Approx(2.0 * 5.0 * 4.0 / (2.0 * load0 + 1.0)).epsilon(1e-14));
  CHECK(s(1, 2) == doctest::Approx(2.0 * 5.0 * 1.0 / (2.0 * 5.0 * 1.0 + 1.0)).epsilon(1e-14));
}

TEST_CASE("strong inter-BS interference drives uplink to zero") {
  const auto p = powers(2, 3, 10.0, 10.0, 10.0);
  double previous = std::numeric_limits<double>::infinity();
  for (double rho : {0.0, 1e-2, 1.0, 1e2, 1e6, 1e12}) {
    const SEReport r = fd_cellular_sum_se(two_cells(rho), p, {0}, {2}, 200);
    CHECK(r.ul_sinr[0] < previous);
    previous = r.ul_sinr[0];
  }
  CHECK(previous < 1e-9);
}

TEST_CASE("time-shared half duplex") {
  const CellularLayout c = two_cells(1.0);
  const auto p = powers(2, 3, 10.0, 10.0, 10.0);
  const SEReport up = fd_cellular_sum_se(c, p, {0, 1}, {}, 200);
  const SEReport down = fd_cellular_sum_se(c, p, {}, {2}, 200);
  const SEReport tdd = cellular_tdd_sum_se(c, p, {0, 1}, {2}, 200, 0.25);
  CHECK(tdd.ul_sum_se == doctest::Approx(0.25 * up.ul_sum_se));
  CHECK(tdd.dl_sum_se == doctest::Approx(0.75 * down.dl_sum_se));
  CHECK(tdd.sum_se == doctest::Approx(tdd.ul_sum_se + tdd.dl_sum_se));
  CHECK_THROWS_AS(cellular_tdd_sum_se(c, p, {0, 1}, {2}, 200, 1.5), ConfigError);
  CHECK_THROWS_AS(fd_cellular_sum_se(c, p, {0, 1}, {2}, 1), ConfigError);
}

TEST_CASE("layout from a cell-free drop") {
  NetworkConfig cfg;
  cfg.num_ues = 12;
  Rng rng = make_stream(6, 0);
  const auto drop = build_geometry(cfg, rng);
  const auto c = build_cellular_layout(drop, 4, 16, -10.0);
  CHECK(c.num_cells() == 4);
  CHECK(c.epsilon == drop.epsilon);
  CHECK(c.rho(0, 1) == doctest::Approx(0.1 * pathloss(500.0, cfg)));
  CHECK(c.rho(0, 3) == doctest::Approx(0.1 * pathloss(500.0 * std::sqrt(2.0), cfg)));
  for (std::size_t a = 0; a < 12; ++a) {
    for (std::size_t b = a + 1; b < 12; ++b) {
      if (c.cell_of_ue[a] == c.cell_of_ue[b]) CHECK(c.pilot_of_ue[a] != c.pilot_of_ue[b]);
    }
  }
  const auto off = build_cellular_layout(drop, 4, 16, -std::numeric_limits<double>::infinity());
  CHECK(off.rho.isZero(0.0));
}

// Signal-level simulation of the two-cell full-duplex system. Every channel,
// pilot observation and BS-BS matrix is drawn; the use-and-then-forget terms
// are formed from sample moments of the effective scalar channels.
TEST_CASE("two-cell signal-level agreement") {
  const CellularLayout c = two_cells(0.02);
  const auto p = powers(2, 3, 4.0, 6.0, 8.0);
  const SEReport closed = fd_cellular_sum_se(c, p, {0, 1}, {2}, 200);

  const Eigen::Index n_ant = 8;
  const double tp = 2.0;
  const RealMatrix sigma = cellular_sigma_sq(c, p);
  // Precoder scaling of BS 1, whose only DL user is UE 2.
  const double kappa1 = 1.0 / (n_ant * sigma(1, 2));

  constexpr int kDraws = 100000;
  Complex ul_mean = 0.0;
  double ul_sq = 0.0;
  double ul_mui = 0.0;
  double ul_ibs = 0.0;
  double ul_noise = 0.0;
  Complex dl_mean = 0.0;
  double dl_sq = 0.0;
  double dl_iui = 0.0;
  Rng rng = make_stream(99, 5);
  auto cn_vec = [&](double var) {
    ComplexVector v(n_ant);
    for (Eigen::Index a = 0; a < n_ant; ++a) v(a) = draw_cn(rng, var);
    return v;
  };
  for (int d = 0; d < kDraws; ++d) {
    ComplexVector f[2][3];
    for (int l = 0; l < 2; ++l) {
      for (int u = 0; u < 3; ++u) f[l][u] = cn_vec(c.beta(l, u));
    }
    // Received pilot sequences after projection, per BS and pilot.
    ComplexVector y[2][2];
    for (int l = 0; l < 2; ++l) {
      for (int q = 0; q < 2; ++q) y[l][q] = cn_vec(c.noise_power);
      for (int u = 0; u < 3; ++u) y[l][c.pilot_of_ue[u]] += std::sqrt(tp * p.pilot_power[u]) * f[l][u];
    }
    auto estimate = [&](int l, int u) {
      double load = 0.0;
      for (int v = 0; v < 3; ++v) {
        if (c.pilot_of_ue[v] == c.pilot_of_ue[u]) load += p.pilot_power[v] * c.beta(l, v);
      }
      const double gain = std::sqrt(tp * p.pilot_power[u]) * c.beta(l, u) / (tp * load + c.noise_power);
      return ComplexVector(gain * y[l][c.pilot_of_ue[u]]);
    };
    const ComplexVector v0 = estimate(0, 0);
    const ComplexVector precoder = std::sqrt(p.dl_power[1]) * kappa1 * estimate(1, 2);

    ComplexMatrix g(n_ant, n_ant);
    for (Eigen::Index a = 0; a < n_ant; ++a) {
      for (Eigen::Index b = 0; b < n_ant; ++b) g(a, b) = draw_cn(rng, c.rho(0, 1));
    }

    // Uplink of UE 0 at BS 0 with MRC.
    const Complex h = v0.dot(f[0][0]);
    ul_mean += h;
    ul_sq += std::norm(h);
    ul_mui += p.ul_power[1] * std::norm(v0.dot(f[0][1]));
    ul_ibs += std::norm(v0.dot(g * precoder));
    ul_noise += c.noise_power * v0.squaredNorm();

    // Downlink of UE 2 from BS 1 with MFP.
    const Complex e = f[1][2].dot(precoder);
    dl_mean += e;
    dl_sq += std::norm(e);
    dl_iui += p.ul_power[0] * std::norm(draw_cn(rng, c.epsilon(2, 0))) +
              p.ul_power[1] * std::norm(draw_cn(rng, c.epsilon(2, 1)));
  }
  const double r = kDraws;
  const double ul_signal = p.ul_power[0] * std::norm(ul_mean / r);
  const double ul_var = p.ul_power[0] * (ul_sq / r - std::norm(ul_mean / r));
  const double ul_sinr = ul_signal / (ul_var + ul_mui / r + ul_ibs / r + ul_noise / r);
  const double dl_signal = std::norm(dl_mean / r);
  const double dl_var = dl_sq / r - dl_signal;
  const double dl_sinr = dl_signal / (dl_var + dl_iui / r + c.noise_power);

  CHECK(ul_sinr == doctest::Approx(closed.ul_sinr[0]).epsilon(0.02));
  CHECK(dl_sinr == doctest::Approx(closed.dl_sinr[2]).epsilon(0.02));
}

}  // TEST_SUITE

}  // namespace
}  // namespace dtdd
