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
#include "elaa/scene.hpp"

namespace elaa {

// Per-subarray precoder blocks. Precoders are derived once for the full array and sliced;
// deactivating a subarray only zeroes its contribution through the activation weights.
struct PrecoderSet {
  std::vector<Eigen::MatrixXcd> near;                    // [s] M_s x K_N
  std::vector<std::vector<Eigen::MatrixXcd>> far;        // [realization][s] M_s x K_F
  std::vector<Eigen::VectorXcd> sensing;                 // [s] unit-norm w_s^r
  Eigen::VectorXd eta_near;                              // K_N
  Eigen::VectorXd eta_far;                               // K_F
  Eigen::VectorXd eta_sense;                             // S
};

// tr(w w^H) per subarray and user; the far traces are averaged over realizations.
struct PrecoderTraces {
  Eigen::MatrixXd near;         // S x K_N
  Eigen::MatrixXd far;          // S x K_F
  Eigen::VectorXd sensing_norm2;  // S
};

// H (H^H H)^{-1}. Throws SingularChannelError if H lacks full column rank.
Eigen::MatrixXcd zf_pseudo_inverse(const Eigen::MatrixXcd& channel);

std::vector<Eigen::MatrixXcd> slice_rows(const Eigen::MatrixXcd& full, const ArrayGeometry& geometry);
Eigen::MatrixXcd stack_rows(const std::vector<Eigen::MatrixXcd>& slices);

std::vector<Eigen::MatrixXcd> zf_near(const Eigen::MatrixXcd& near_channel, const ArrayGeometry& geometry);
std::vector<Eigen::MatrixXcd> zf_far(const Eigen::MatrixXcd& far_realization, const ArrayGeometry& geometry);

// conj(v_s) / ||v_s||, the matched beam for the v_s^T w term. Throws GeometryError on a zero slice.
std::vector<Eigen::VectorXcd> sensing_beamformer(const std::vector<Eigen::VectorXcd>& steering_slices);

PrecoderTraces precoder_traces(const PrecoderSet& precoders);

struct PowerCoefficients {
  Eigen::VectorXd eta_near;
  Eigen::VectorXd eta_far;
  Eigen::VectorXd eta_sense;
};

// Splits P_t: `sensing_share` goes to the sensing streams (equal per subarray), the rest
// equally per communication user, then everything is scaled by the largest factor that
// keeps sum_s gamma_s <= P_t and gamma_s <= P_s at full activation.
// Throws ConfigError if the sensing split alone breaks the per-subarray cap.
PowerCoefficients allocate_powers(const SystemConfig& config, const PrecoderTraces& traces);

// Per-subarray transmit power gamma_s at full activation.
Eigen::VectorXd full_activation_gamma(const PowerCoefficients& eta, const PrecoderTraces& traces);

PrecoderSet build_precoders(const ChannelSet& channels, const SteeringVector& steering,
                            const ArrayGeometry& geometry, const SystemConfig& config);

}  // namespace elaa
