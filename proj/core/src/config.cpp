// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "elaa/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "elaa/errors.hpp"
#include "elaa/rng.hpp"

namespace elaa {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

bool valid_target_angles(const Position& p) {
  return p.theta_rad > 0.0 && p.theta_rad < kPi / 2 && p.phi_rad > -kPi / 2 && p.phi_rad < kPi / 2;
}

Position draw_position(RngStream& rng, double range_min, double range_max) {
  Position p;
  p.range_m = rng.uniform(range_min, range_max);
  // Open intervals: uniform() is in [0,1), so map through (1 - u) on the lower side.
  p.theta_rad = (kPi / 2) * (1.0 - rng.uniform());
  if (p.theta_rad >= kPi / 2) p.theta_rad = std::nextafter(kPi / 2, 0.0);
  p.phi_rad = -kPi / 2 + kPi * (1.0 - rng.uniform());
  if (p.phi_rad >= kPi / 2) p.phi_rad = std::nextafter(kPi / 2, 0.0);
  return p;
}

nlohmann::json position_to_json(const Position& p) {
  return nlohmann::json::array({p.range_m, p.theta_rad, p.phi_rad});
}

Position position_from_json(const nlohmann::json& j, const std::string& key) {
  require(j.is_array() && j.size() == 3, key + " entries must be [range_m, theta_rad, phi_rad]");
  return Position{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

// Reads `<name>_W` or `<name>_dBm`; both present is an error.
std::optional<double> read_power(const nlohmann::json& doc, const std::string& name,
                                 std::set<std::string>& seen) {
  const std::string w = name + "_W";
  const std::string dbm = name + "_dBm";
  const bool has_w = doc.contains(w);
  const bool has_dbm = doc.contains(dbm);
  require(!(has_w && has_dbm), "both " + w + " and " + dbm + " given");
  if (has_w) {
    seen.insert(w);
    return doc.at(w).get<double>();
  }
  if (has_dbm) {
    seen.insert(dbm);
    return dbm_to_watts(doc.at(dbm).get<double>());
  }
  return std::nullopt;
}

}  // namespace

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double SystemConfig::subarray_cap_W() const {
  return subarray_power_cap_W.value_or(1.5 * total_power_cap_W / subarray_count);
}

bool SystemConfig::placements_resolved() const noexcept {
  return static_cast<int>(nfue_positions.size()) == nfue_count &&
         static_cast<int>(ffue_distances_m.size()) == ffue_count && target.has_value();
}

void SystemConfig::validate() const {
  require(elements_x >= 1 && elements_y >= 1, "array dimensions must be positive");
  require(elements_per_subarray >= 1 && subarray_count >= 1, "subarray layout must be positive");
  require(element_count() == subarray_count * elements_per_subarray,
          "M_t = M_x * M_y must equal S * M_s");
  require(wavelength_m > 0.0, "wavelength_m must be positive");
  require(spacing_m > 0.0, "spacing_m must be positive");
  require(nfue_count >= 0 && ffue_count >= 0, "user counts must be nonnegative");
  require(nfue_count <= element_count() && ffue_count <= element_count(),
          "more users than antennas: ZF needs K <= M_t");
  require(nfue_positions.empty() || static_cast<int>(nfue_positions.size()) == nfue_count,
          "nfue_params length must equal K_N");
  for (const auto& p : nfue_positions) require(p.range_m > 0.0, "NFUE range must be positive");
  require(ffue_distances_m.empty() || static_cast<int>(ffue_distances_m.size()) == ffue_count,
          "ffue_distances_m length must equal K_F");
  for (double d : ffue_distances_m) require(d > 0.0, "FFUE distance must be positive");
  if (target) {
    require(target->range_m > 0.0, "target range must be positive");
    require(valid_target_angles(*target), "target angles must satisfy theta in (0, pi/2), phi in (-pi/2, pi/2)");
  }
  require(nfue_range_min_m > 0.0 && nfue_range_max_m >= nfue_range_min_m, "invalid NFUE range");
  require(ffue_distance_min_m > 0.0 && ffue_distance_max_m >= ffue_distance_min_m,
          "invalid FFUE distance range");
  require(noise_power_W > 0.0, "noise power must be positive");
  require(total_power_cap_W > 0.0, "P_t must be positive");
  require(!subarray_power_cap_W || *subarray_power_cap_W > 0.0, "P_s must be positive");
  require(synthesizer_power_W > 0.0, "P_syn must be positive");
  require(rf_chain_power_W > 0.0, "P_ct must be positive");
  require(amplifier_efficiency > 0.0 && amplifier_efficiency <= 1.0, "zeta must lie in (0, 1]");
  require(qos_fraction > 0.0 && qos_fraction <= 1.0, "qos_fraction must lie in (0, 1]");
  require(sensing_share >= 0.0 && sensing_share <= 1.0, "sensing_share must lie in [0, 1]");
  require(penalty_init > 0.0, "penalty_init must be positive");
  require(penalty_growth >= 1.0, "penalty_growth must be >= 1");
  require(penalty_cap >= penalty_init, "penalty_cap must be >= penalty_init");
  require(tol_eps1 > 0.0, "tol_eps1 must be positive");
  require(max_iterations >= 1, "I1 must be >= 1");
  require(mc_samples >= 2, "mc_samples must be >= 2");
}

SystemConfig SystemConfig::resolve_placements(std::uint64_t seed) const {
  SystemConfig out = *this;
  out.rng_seed = seed;
  RngStream rng(seed, Stream::placement);
  // Draw in a fixed order so a partially specified config still gets a stable layout.
  std::vector<Position> nfue;
  for (int k = 0; k < nfue_count; ++k) nfue.push_back(draw_position(rng, nfue_range_min_m, nfue_range_max_m));
  std::vector<double> ffue;
  for (int k = 0; k < ffue_count; ++k) ffue.push_back(rng.uniform(ffue_distance_min_m, ffue_distance_max_m));
  const Position drawn_target = draw_position(rng, nfue_range_min_m, nfue_range_max_m);

  if (static_cast<int>(out.nfue_positions.size()) != nfue_count) out.nfue_positions = std::move(nfue);
  if (static_cast<int>(out.ffue_distances_m.size()) != ffue_count) out.ffue_distances_m = std::move(ffue);
  if (!out.target) out.target = drawn_target;
  return out;
}

SystemConfig SystemConfig::with_layout(int ex, int ey, int per_subarray) const {
  SystemConfig out = *this;
  out.elements_x = ex;
  out.elements_y = ey;
  out.elements_per_subarray = per_subarray;
  require(per_subarray > 0 && (ex * ey) % per_subarray == 0, "M_s must divide M_t");
  out.subarray_count = ex * ey / per_subarray;
  return out;
}

SystemConfig SystemConfig::with_users(int nfue, int ffue) const {
  SystemConfig out = *this;
  out.nfue_count = nfue;
  out.ffue_count = ffue;
  if (static_cast<int>(out.nfue_positions.size()) != nfue) out.nfue_positions.clear();
  if (static_cast<int>(out.ffue_distances_m.size()) != ffue) out.ffue_distances_m.clear();
  return out;
}

SystemConfig desk_profile() {
  return SystemConfig{};
}

SystemConfig full_profile() {
  SystemConfig c;
  c.elements_x = 20;
  c.elements_y = 20;
  c.elements_per_subarray = 50;
  c.subarray_count = 8;
  c.nfue_count = 2;
  c.ffue_count = 2;
  return c;
}

SystemConfig config_from_json(const nlohmann::json& doc, const SystemConfig& base) {
  require(doc.is_object(), "config must be a JSON object");
  SystemConfig c = base;
  std::set<std::string> seen;
  auto get = [&](const char* key, auto& field) {
    if (doc.contains(key)) {
      seen.insert(key);
      field = doc.at(key).get<std::decay_t<decltype(field)>>();
    }
  };
  try {
    get("M_x", c.elements_x);
    get("M_y", c.elements_y);
    get("M_s", c.elements_per_subarray);
    get("wavelength_m", c.wavelength_m);
    get("spacing_m", c.spacing_m);
    get("K_N", c.nfue_count);
    get("K_F", c.ffue_count);
    get("zeta", c.amplifier_efficiency);
    get("qos_fraction", c.qos_fraction);
    get("sensing_share", c.sensing_share);
    get("penalty_init", c.penalty_init);
    get("penalty_growth", c.penalty_growth);
    get("penalty_cap", c.penalty_cap);
    get("tol_eps1", c.tol_eps1);
    get("I1", c.max_iterations);
    get("mc_samples", c.mc_samples);
    get("rng_seed", c.rng_seed);
    get("ffue_distances_m", c.ffue_distances_m);

    if (doc.contains("S")) {
      seen.insert("S");
      c.subarray_count = doc.at("S").get<int>();
    } else if (c.elements_per_subarray > 0) {
      c.subarray_count = c.elements_x * c.elements_y / c.elements_per_subarray;
    }
    if (doc.contains("nfue_params")) {
      seen.insert("nfue_params");
      c.nfue_positions.clear();
      for (const auto& p : doc.at("nfue_params")) c.nfue_positions.push_back(position_from_json(p, "nfue_params"));
    }
    if (doc.contains("target")) {
      seen.insert("target");
      c.target = position_from_json(doc.at("target"), "target");
    }
    if (doc.contains("nfue_range_m")) {
      seen.insert("nfue_range_m");
      const auto& r = doc.at("nfue_range_m");
      require(r.is_array() && r.size() == 2, "nfue_range_m must be [min, max]");
      c.nfue_range_min_m = r[0].get<double>();
      c.nfue_range_max_m = r[1].get<double>();
    }
    if (doc.contains("ffue_distance_range_m")) {
      seen.insert("ffue_distance_range_m");
      const auto& r = doc.at("ffue_distance_range_m");
      require(r.is_array() && r.size() == 2, "ffue_distance_range_m must be [min, max]");
      c.ffue_distance_min_m = r[0].get<double>();
      c.ffue_distance_max_m = r[1].get<double>();
    }
    if (auto v = read_power(doc, "noise_power", seen)) c.noise_power_W = *v;
    if (auto v = read_power(doc, "P_t", seen)) c.total_power_cap_W = *v;
    if (auto v = read_power(doc, "P_s", seen)) c.subarray_power_cap_W = *v;
    if (auto v = read_power(doc, "P_syn", seen)) c.synthesizer_power_W = *v;
    if (auto v = read_power(doc, "P_ct", seen)) c.rf_chain_power_W = *v;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config field: ") + e.what());
  }
  for (const auto& [key, value] : doc.items()) {
    require(seen.count(key) == 1, "unknown config key: " + key);
  }
  c.validate();
  return c;
}

SystemConfig config_from_json(const nlohmann::json& doc) { return config_from_json(doc, desk_profile()); }

nlohmann::json config_to_json(const SystemConfig& c) {
  nlohmann::json j;
  j["M_x"] = c.elements_x;
  j["M_y"] = c.elements_y;
  j["M_s"] = c.elements_per_subarray;
  j["S"] = c.subarray_count;
  j["wavelength_m"] = c.wavelength_m;
  j["spacing_m"] = c.spacing_m;
  j["K_N"] = c.nfue_count;
  j["K_F"] = c.ffue_count;
  if (!c.nfue_positions.empty()) {
    auto arr = nlohmann::json::array();
    for (const auto& p : c.nfue_positions) arr.push_back(position_to_json(p));
    j["nfue_params"] = arr;
  }
  if (!c.ffue_distances_m.empty()) j["ffue_distances_m"] = c.ffue_distances_m;
  if (c.target) j["target"] = position_to_json(*c.target);
  j["nfue_range_m"] = {c.nfue_range_min_m, c.nfue_range_max_m};
  j["ffue_distance_range_m"] = {c.ffue_distance_min_m, c.ffue_distance_max_m};
  j["noise_power_W"] = c.noise_power_W;
  j["P_t_W"] = c.total_power_cap_W;
  if (c.subarray_power_cap_W) j["P_s_W"] = *c.subarray_power_cap_W;
  j["P_syn_W"] = c.synthesizer_power_W;
  j["P_ct_W"] = c.rf_chain_power_W;
  j["zeta"] = c.amplifier_efficiency;
  j["qos_fraction"] = c.qos_fraction;
  j["sensing_share"] = c.sensing_share;
  j["penalty_init"] = c.penalty_init;
  j["penalty_growth"] = c.penalty_growth;
  j["penalty_cap"] = c.penalty_cap;
  j["tol_eps1"] = c.tol_eps1;
  j["I1"] = c.max_iterations;
  j["mc_samples"] = c.mc_samples;
  j["rng_seed"] = c.rng_seed;
  return j;
}

SystemConfig load_config(const std::string& path, const SystemConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return config_from_json(doc, base);
}

SystemConfig load_config(const std::string& path) { return load_config(path, desk_profile()); }

}  // namespace elaa
