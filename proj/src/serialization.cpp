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

#include "dtdd/serialization.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dtdd {
namespace {

void check_keys(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "config must be an object" : path + " must be an object");
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (!names.count(item.key())) {
      throw ConfigError("unknown config key '" + (path.empty() ? "" : path + ".") + item.key() + "'");
    }
  }
}

template <typename T>
void read(const Json& j, const char* key, const std::string& path, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config key '" + (path.empty() ? "" : path + ".") + key + "' has the wrong type");
  }
}

void read_real(const Json& j, const char* key, const std::string& path, double& out) {
  if (j.contains(key)) out = real_from_json(j.at(key), (path.empty() ? "" : path + ".") + key);
}

Json matrix_to_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json points_to_json(const std::vector<Point2>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back({p.x, p.y});
  return a;
}

std::vector<Point2> points_from_json(const Json& j) {
  std::vector<Point2> pts;
  for (const auto& p : j) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return pts;
}

Json network_to_json(const NetworkConfig& n) {
  return {{"area_side_m", n.area_side_m},
          {"num_aps", n.num_aps},
          {"antennas_per_ap", n.antennas_per_ap},
          {"num_ues", n.num_ues},
          {"pathloss_exponent", n.pathloss_exponent},
          {"reference_distance_m", n.reference_distance_m},
          {"noise_power", n.noise_power},
          {"cli_residual_db", real_to_json(n.cli_residual_db)}};
}

NetworkConfig network_from_json(const Json& j, const std::string& path) {
  check_keys(j, path, {"area_side_m", "num_aps", "antennas_per_ap", "num_ues", "pathloss_exponent",
                       "reference_distance_m", "noise_power", "cli_residual_db"});
  NetworkConfig n;
  read_real(j, "area_side_m", path, n.area_side_m);
  read(j, "num_aps", path, n.num_aps);
  read(j, "antennas_per_ap", path, n.antennas_per_ap);
  read(j, "num_ues", path, n.num_ues);
  read_real(j, "pathloss_exponent", path, n.pathloss_exponent);
  read_real(j, "reference_distance_m", path, n.reference_distance_m);
  read_real(j, "noise_power", path, n.noise_power);
  read_real(j, "cli_residual_db", path, n.cli_residual_db);
  return n;
}

Json summary_to_json(const Summary& s) {
  return {{"mean", s.mean}, {"median", s.median}, {"percentile_90_likely", s.percentile_90_likely}};
}

Summary summary_from_json(const Json& j) {
  return {j.at("mean").get<double>(), j.at("median").get<double>(),
          j.at("percentile_90_likely").get<double>()};
}

}  // namespace

Json real_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double real_from_json(const Json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw ConfigError("config key '" + field + "' must be a number, \"inf\" or \"-inf\"");
}

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["network"] = network_to_json(c.network);
  j["pilot"] = {{"tau", c.pilot.tau},
                {"tau_p", c.pilot.tau_p},
                {"pilot_snr_db", c.pilot.pilot_snr_db},
                {"allocation", to_string(c.pilot.allocation)},
                {"n_iter", c.pilot.n_iter},
                {"alpha_threshold", real_to_json(c.pilot.alpha_threshold)},
                {"cells", c.pilot.cells}};
  j["powers"] = {{"ul_snr_db", c.powers.ul_snr_db}, {"dl_snr_db", c.powers.dl_snr_db}};
  j["demand"] = c.demand;
  j["scheme"] = to_string(c.scheme);
  j["processing"] = to_string(c.processing);
  j["drops"] = c.drops;
  j["seed"] = c.seed;
  j["sweep"] = {{"parameter", c.sweep.parameter}, {"values", c.sweep.values}};
  j["mc"] = {{"n_realizations", c.mc.n_realizations}};
  if (c.mc.rzf_xi) j["mc"]["rzf_xi"] = *c.mc.rzf_xi;
  j["cellular"] = {{"num_cells", c.cellular.num_cells}, {"antennas", c.cellular.antennas}};
  j["tdd"] = Json::object();
  if (c.tdd.ul_weight) j["tdd"]["ul_weight"] = *c.tdd.ul_weight;
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  check_keys(j, "", {"network", "pilot", "powers", "demand", "scheme", "processing", "drops", "seed",
                     "sweep", "mc", "cellular", "tdd"});
  ExperimentConfig c;
  if (j.contains("network")) c.network = network_from_json(j.at("network"), "network");
  if (j.contains("pilot")) {
    const Json& p = j.at("pilot");
    check_keys(p, "pilot", {"tau", "tau_p", "pilot_snr_db", "allocation", "n_iter", "alpha_threshold", "cells"});
    read(p, "tau", "pilot", c.pilot.tau);
    read(p, "tau_p", "pilot", c.pilot.tau_p);
    read_real(p, "pilot_snr_db", "pilot", c.pilot.pilot_snr_db);
    std::string alloc = to_string(c.pilot.allocation);
    read(p, "allocation", "pilot", alloc);
    c.pilot.allocation = parse_pilot_scheme(alloc);
    read(p, "n_iter", "pilot", c.pilot.n_iter);
    read_real(p, "alpha_threshold", "pilot", c.pilot.alpha_threshold);
    read(p, "cells", "pilot", c.pilot.cells);
  }
  if (j.contains("powers")) {
    const Json& p = j.at("powers");
    check_keys(p, "powers", {"ul_snr_db", "dl_snr_db"});
    read_real(p, "ul_snr_db", "powers", c.powers.ul_snr_db);
    read_real(p, "dl_snr_db", "powers", c.powers.dl_snr_db);
  }
  read_real(j, "demand", "", c.demand);
  std::string scheme = to_string(c.scheme);
  read(j, "scheme", "", scheme);
  c.scheme = parse_scheme(scheme);
  std::string processing = to_string(c.processing);
  read(j, "processing", "", processing);
  c.processing = parse_processing(processing);
  read(j, "drops", "", c.drops);
  read(j, "seed", "", c.seed);
  if (j.contains("sweep")) {
    const Json& s = j.at("sweep");
    check_keys(s, "sweep", {"parameter", "values"});
    read(s, "parameter", "sweep", c.sweep.parameter);
    if (s.contains("values")) {
      c.sweep.values.clear();
      for (const auto& v : s.at("values")) c.sweep.values.push_back(real_from_json(v, "sweep.values"));
    }
  }
  if (j.contains("mc")) {
    const Json& m = j.at("mc");
    check_keys(m, "mc", {"n_realizations", "rzf_xi"});
    read(m, "n_realizations", "mc", c.mc.n_realizations);
    if (m.contains("rzf_xi") && !m.at("rzf_xi").is_null()) {
      c.mc.rzf_xi = real_from_json(m.at("rzf_xi"), "mc.rzf_xi");
    }
  }
  if (j.contains("cellular")) {
    const Json& m = j.at("cellular");
    check_keys(m, "cellular", {"num_cells", "antennas"});
    read(m, "num_cells", "cellular", c.cellular.num_cells);
    read(m, "antennas", "cellular", c.cellular.antennas);
  }
  if (j.contains("tdd")) {
    const Json& m = j.at("tdd");
    check_keys(m, "tdd", {"ul_weight"});
    if (m.contains("ul_weight") && !m.at("ul_weight").is_null()) {
      c.tdd.ul_weight = real_from_json(m.at("ul_weight"), "tdd.ul_weight");
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

Json campaign_to_json(const CampaignResult& r) {
  Json j;
  j["version"] = r.version;
  j["wall_clock_s"] = r.wall_clock_s;
  j["config"] = config_to_json(r.config);
  Json points = Json::array();
  for (const auto& p : r.points) {
    Json jp;
    jp["value"] = p.value ? Json(*p.value) : Json(nullptr);
    Json drops = Json::array();
    for (const auto& d : p.drops) {
      drops.push_back({{"drop", d.drop}, {"sum_se", d.sum_se}, {"ul_se", d.ul_se}, {"dl_se", d.dl_se}});
    }
    jp["drops"] = std::move(drops);
    Json cdf = Json::array();
    for (const auto& c : p.cdf) cdf.push_back({c.value, c.probability});
    jp["cdf"] = std::move(cdf);
    jp["sum_se"] = summary_to_json(p.sum_se);
    jp["ul_se"] = summary_to_json(p.ul_se);
    jp["dl_se"] = summary_to_json(p.dl_se);
    jp["evaluations"] = p.evaluations;
    points.push_back(std::move(jp));
  }
  j["points"] = std::move(points);
  return j;
}

CampaignResult campaign_from_json(const Json& j) {
  CampaignResult r;
  r.version = j.at("version").get<std::string>();
  r.wall_clock_s = j.at("wall_clock_s").get<double>();
  r.config = config_from_json(j.at("config"));
  for (const auto& jp : j.at("points")) {
    SweepPointResult p;
    if (!jp.at("value").is_null()) p.value = jp.at("value").get<double>();
    for (const auto& d : jp.at("drops")) {
      p.drops.push_back({d.at("drop").get<std::size_t>(), d.at("sum_se").get<double>(),
                         d.at("ul_se").get<double>(), d.at("dl_se").get<double>()});
    }
    for (const auto& c : jp.at("cdf")) p.cdf.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
    p.sum_se = summary_from_json(jp.at("sum_se"));
    p.ul_se = summary_from_json(jp.at("ul_se"));
    p.dl_se = summary_from_json(jp.at("dl_se"));
    p.evaluations = jp.at("evaluations").get<std::size_t>();
    r.points.push_back(std::move(p));
  }
  return r;
}

Json geometry_to_json(const NetworkGeometry& g) {
  return {{"config", network_to_json(g.config)},
          {"ap_positions", points_to_json(g.ap_positions)},
          {"ue_positions", points_to_json(g.ue_positions)},
          {"beta", matrix_to_json(g.beta)},
          {"zeta", matrix_to_json(g.zeta)},
          {"epsilon", matrix_to_json(g.epsilon)}};
}

NetworkGeometry geometry_from_json(const Json& j) {
  NetworkConfig config = network_from_json(j.at("config"), "config");
  NetworkGeometry g = geometry_from_positions(config, points_from_json(j.at("ap_positions")),
                                              points_from_json(j.at("ue_positions")));
  if (j.contains("beta") && matrix_to_json(g.beta) != j.at("beta")) {
    throw ConfigError("geometry: stored beta does not match the positions");
  }
  return g;
}

Json assignment_to_json(const PilotAssignment& a) { return a.labels(); }

PilotAssignment assignment_from_json(const Json& j, std::size_t num_pilots) {
  PilotAssignment a(num_pilots, j.get<std::vector<std::size_t>>());
  a.validate(a.num_ues());
  return a;
}

Json schedule_to_json(const Schedule& s, std::size_t num_aps) {
  Json modes = Json::array();
  for (char c : s.ap_modes(num_aps)) modes.push_back(c == 'U' ? "UL" : c == 'D' ? "DL" : "-");
  return {{"ap_modes", modes}, {"ue_ul", s.ue_ul}, {"ue_dl", s.ue_dl}};
}

Schedule schedule_from_json(const Json& j) {
  Schedule s;
  const auto modes = j.at("ap_modes").get<std::vector<std::string>>();
  for (std::size_t m = 0; m < modes.size(); ++m) {
    if (modes[m] == "UL") {
      s.ap_ul.push_back(m);
    } else if (modes[m] == "DL") {
      s.ap_dl.push_back(m);
    } else if (modes[m] != "-") {
      throw ConfigError("schedule.ap_modes[" + std::to_string(m) + "] must be UL, DL or -");
    }
  }
  s.ue_ul = j.at("ue_ul").get<IndexSet>();
  s.ue_dl = j.at("ue_dl").get<IndexSet>();
  return s;
}

Json report_to_json(const SEReport& r) {
  return {{"ul_sinr", r.ul_sinr}, {"dl_sinr", r.dl_sinr}, {"ul_se", r.ul_se},
          {"dl_se", r.dl_se},     {"prelog", r.prelog},   {"ul_sum_se", r.ul_sum_se},
          {"dl_sum_se", r.dl_sum_se}, {"sum_se", r.sum_se}};
}

}  // namespace dtdd
