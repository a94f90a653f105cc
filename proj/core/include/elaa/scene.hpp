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

#include <vector>

#include <Eigen/Dense>

#include "elaa/config.hpp"
#include "elaa/rng.hpp"

namespace elaa {

// Contiguous block of flat element indices [first, first + size).
struct IndexSlice {
  int first = 0;
  int size = 0;
};

// Planar M_x x M_y array, flattened with m_x running fastest, then cut into S contiguous
// subarrays of M_s elements. Element coordinates are centred on the array middle, so for
// even dimensions the offsets are half-integers (in units of the spacing).
class ArrayGeometry {
 public:
  ArrayGeometry(int elements_x, int elements_y, int elements_per_subarray, double spacing_m);
  static ArrayGeometry from_config(const SystemConfig& config);

  int elements_x() const noexcept { return elements_x_; }
  int elements_y() const noexcept { return elements_y_; }
  int element_count() const noexcept { return elements_x_ * elements_y_; }
  int elements_per_subarray() const noexcept { return elements_per_subarray_; }
  int subarray_count() const noexcept { return element_count() / elements_per_subarray_; }
  double spacing_m() const noexcept { return spacing_m_; }

  int flat_index(int ix, int iy) const noexcept { return ix + elements_x_ * iy; }
  int grid_x(int flat) const noexcept { return flat % elements_x_; }
  int grid_y(int flat) const noexcept { return flat / elements_x_; }
  // Centred coordinates in units of spacing.
  double offset_x(int flat) const noexcept;
  double offset_y(int flat) const noexcept;

  IndexSlice subarray(int s) const noexcept { return {s * elements_per_subarray_, elements_per_subarray_}; }
  int subarray_of(int flat) const noexcept { return flat / elements_per_subarray_; }

 private:
  int elements_x_;
  int elements_y_;
  int elements_per_subarray_;
  double spacing_m_;
};

// Distance from the element at centred offsets (mx, my) to a point at (range, theta, phi).
// Throws GeometryError when the radicand is negative or the range is not positive.
double near_field_distance(double range_m, double theta_rad, double phi_rad, double mx, double my,
                           double spacing_m);

// Spherical-wavefront response (lambda / (4 pi r_m)) exp(-j 2 pi r_m / lambda) over all elements.
Eigen::VectorXcd spherical_response(const ArrayGeometry& geometry, double wavelength_m, const Position& at);

Eigen::VectorXcd near_field_channel(const ArrayGeometry& geometry, const SystemConfig& config, int user_index);

// 10^-0.53 / d^2. Throws DomainError for d <= 0.
double far_field_large_scale(double distance_m);

// One draw of the unit-variance small-scale fading matrix (elements x users), i.i.d. CN(0,1).
Eigen::MatrixXcd sample_far_field(RngStream& rng, int elements, int users);

struct SteeringVector {
  Eigen::VectorXcd full;
  std::vector<Eigen::VectorXcd> slices;  // v_s = [v]_{iota_s}
};

SteeringVector steering_vector(const ArrayGeometry& geometry, const SystemConfig& config, const Position& target);

struct ChannelSet {
  Eigen::MatrixXcd near;                         // M_t x K_N
  std::vector<Eigen::MatrixXcd> far_realizations;  // mc_samples draws of M_t x K_F, unit variance
  Eigen::VectorXd beta;                          // K_F large-scale gains
};

// Realization r is drawn from its own substream (seed, far_field, r), so the set is
// independent of evaluation order.
ChannelSet build_channels(const ArrayGeometry& geometry, const SystemConfig& config);

template <typename Vector>
auto subarray_view(const Vector& v, const IndexSlice& slice) {
  return v.segment(slice.first, slice.size);
}

}  // namespace elaa
