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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace elaa {

// Spherical position relative to the array centre: range [m], elevation theta [rad], azimuth phi [rad].
struct Position {
  double range_m = 0.0;
  double theta_rad = 0.0;
  double phi_rad = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

// Every physical, power, QoS and algorithm parameter of one scenario, in SI units.
//
// User and target placements may be left unset; `resolve_placements` then draws them
// from the seed so a sweep over seeds also sweeps geometry.
struct SystemConfig {
  // Array
  int elements_x = 8;
  int elements_y = 8;
  int elements_per_subarray = 8;
  int subarray_count = 8;
  double wavelength_m = 0.01;
  double spacing_m = 0.005;

  // Users and target
  int nfue_count = 1;
  int ffue_count = 1;
  std::vector<Position> nfue_positions;     // empty -> drawn per seed
  std::vector<double> ffue_distances_m;     // empty -> drawn per seed
  std::optional<Position> target;           // unset -> drawn per seed

  // Placement ranges used when drawing
  double nfue_range_min_m = 5.0;
  double nfue_range_max_m = 20.0;
  double ffue_distance_min_m = 110.0;
  double ffue_distance_max_m = 160.0;

  // Powers [W]
  double noise_power_W = 3.981071705534969e-14;  // -104 dBm
  double total_power_cap_W = 1.0;                 // P_t
  std::optional<double> subarray_power_cap_W;     // P_s; unset -> 1.5 P_t / S
  double synthesizer_power_W = 0.05;              // P_syn
  double rf_chain_power_W = 0.0482;               // P_ct, per element
  double amplifier_efficiency = 0.35;             // zeta

  // QoS and precoding
  double qos_fraction = 0.7;
  double sensing_share = 0.3;

  // Algorithm
  double penalty_init = 0.01;
  double penalty_growth = 1.5;
  double penalty_cap = 1e6;
  double tol_eps1 = 1e-3;
  int max_iterations = 50;
  int mc_samples = 200;
  std::uint64_t rng_seed = 1;

  int element_count() const noexcept { return elements_x * elements_y; }
  int user_count() const noexcept { return nfue_count + ffue_count; }
  double subarray_cap_W() const;
  bool placements_resolved() const noexcept;

  // Throws ConfigError on any violated invariant.
  void validate() const;

  // Copy with every unset placement drawn from `seed`; rng_seed is set to `seed`.
  SystemConfig resolve_placements(std::uint64_t seed) const;

  // Copy re-dimensioned to a new array/subarray layout (P_s follows the 1.5 P_t / S rule
  // unless it was set explicitly).
  SystemConfig with_layout(int elements_x, int elements_y, int elements_per_subarray) const;
  SystemConfig with_users(int nfue_count, int ffue_count) const;
};

SystemConfig desk_profile();
SystemConfig full_profile();

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

// Flat JSON document; keys missing from `doc` keep the value from `base`. Powers may be given
// as `<name>_W` or `<name>_dBm`.
SystemConfig config_from_json(const nlohmann::json& doc, const SystemConfig& base);
SystemConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const SystemConfig& config);
SystemConfig load_config(const std::string& path, const SystemConfig& base);
SystemConfig load_config(const std::string& path);

}  // namespace elaa
