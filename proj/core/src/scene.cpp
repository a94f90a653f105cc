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

#include "elaa/scene.hpp"

#include <cmath>
#include <complex>
#include <iostream>
#include <numbers>

#include "elaa/errors.hpp"

namespace elaa {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kLargeScaleNumerator = 0.29512092266663853;  // 10^-0.53
}  // namespace

ArrayGeometry::ArrayGeometry(int elements_x, int elements_y, int elements_per_subarray, double spacing_m)
    : elements_x_(elements_x),
      elements_y_(elements_y),
      elements_per_subarray_(elements_per_subarray),
      spacing_m_(spacing_m) {
  if (elements_x <= 0 || elements_y <= 0 || elements_per_subarray <= 0 ||
      (elements_x * elements_y) % elements_per_subarray != 0) {
    throw ConfigError("array layout must satisfy M_t = S * M_s with positive sizes");
  }
  if (!(spacing_m > 0.0)) throw ConfigError("element spacing must be positive");
}

ArrayGeometry ArrayGeometry::from_config(const SystemConfig& config) {
  config.validate();
  return ArrayGeometry(config.elements_x, config.elements_y, config.elements_per_subarray, config.spacing_m);
}

double ArrayGeometry::offset_x(int flat) const noexcept {
  return grid_x(flat) - 0.5 * (elements_x_ - 1);
}

double ArrayGeometry::offset_y(int flat) const noexcept {
  return grid_y(flat) - 0.5 * (elements_y_ - 1);
}

double near_field_distance(double range_m, double theta_rad, double phi_rad, double mx, double my,
                           double spacing_m) {
  if (!(range_m > 0.0)) throw GeometryError("range must be positive");
  const double omega = (mx * mx + my * my) * spacing_m * spacing_m;
  const double radicand = range_m * range_m -
                          2.0 * range_m * mx * spacing_m * std::cos(theta_rad) * std::sin(phi_rad) -
                          2.0 * range_m * my * spacing_m * std::sin(theta_rad) + omega;
  if (radicand < 0.0 || !std::isfinite(radicand)) {
    throw GeometryError("negative distance radicand: point lies inside or through the array");
  }
  return std::sqrt(radicand);
}

Eigen::VectorXcd spherical_response(const ArrayGeometry& geometry, double wavelength_m, const Position& at) {
  const int n = geometry.element_count();
  Eigen::VectorXcd out(n);
  const double wavenumber = 2.0 * kPi / wavelength_m;
  for (int m = 0; m < n; ++m) {
    const double r = near_field_distance(at.range_m, at.theta_rad, at.phi_rad, geometry.offset_x(m),
                                         geometry.offset_y(m), geometry.spacing_m());
    if (!(r > 0.0)) throw GeometryError("point coincides with an array element");
    out(m) = (wavelength_m / (4.0 * kPi * r)) * std::polar(1.0, -wavenumber * r);
  }
  return out;
}

Eigen::VectorXcd near_field_channel(const ArrayGeometry& geometry, const SystemConfig& config, int user_index) {
  if (user_index < 0 || user_index >= static_cast<int>(config.nfue_positions.size())) {
    throw ConfigError("NFUE index out of range or placements unresolved");
  }
  return spherical_response(geometry, config.wavelength_m, config.nfue_positions[user_index]);
}

double far_field_large_scale(double distance_m) {
  if (!(distance_m > 0.0)) throw DomainError("FFUE distance must be positive");
  if (distance_m < 110.0 || distance_m > 160.0) {
    std::clog << "elaa: warning: FFUE distance " << distance_m
              << " m outside the nominal [110, 160] m range\n";
  }
  return kLargeScaleNumerator / (distance_m * distance_m);
}

Eigen::MatrixXcd sample_far_field(RngStream& rng, int elements, int users) {
  Eigen::MatrixXcd h(elements, users);
  // Column-major fill order is part of the reproducibility contract.
  for (int k = 0; k < users; ++k) {
    for (int m = 0; m < elements; ++m) h(m, k) = rng.complex_normal();
  }
  return h;
}

SteeringVector steering_vector(const ArrayGeometry& geometry, const SystemConfig& config, const Position& target) {
  SteeringVector v;
  v.full = spherical_response(geometry, config.wavelength_m, target);
  for (int s = 0; s < geometry.subarray_count(); ++s) {
    v.slices.push_back(subarray_view(v.full, geometry.subarray(s)));
  }
  return v;
}

ChannelSet build_channels(const ArrayGeometry& geometry, const SystemConfig& config) {
  if (!config.placements_resolved()) throw ConfigError("user placements are not resolved");
  ChannelSet channels;
  const int mt = geometry.element_count();
  channels.near.resize(mt, config.nfue_count);
  for (int k = 0; k < config.nfue_count; ++k) {
    channels.near.col(k) = near_field_channel(geometry, config, k);
  }
  channels.beta.resize(config.ffue_count);
  for (int k = 0; k < config.ffue_count; ++k) {
    channels.beta(k) = far_field_large_scale(config.ffue_distances_m[k]);
  }
  channels.far_realizations.reserve(config.mc_samples);
  for (int r = 0; r < config.mc_samples; ++r) {
    RngStream rng(config.rng_seed, Stream::far_field, static_cast<std::uint64_t>(r));
    channels.far_realizations.push_back(sample_far_field(rng, mt, config.ffue_count));
  }
  return channels;
}

}  // namespace elaa
