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

#include "elaa/precoding.hpp"

#include <algorithm>
#include <limits>

#include "elaa/errors.hpp"

namespace elaa {

Eigen::MatrixXcd zf_pseudo_inverse(const Eigen::MatrixXcd& channel) {
  const Eigen::Index rows = channel.rows();
  const Eigen::Index cols = channel.cols();
  if (cols == 0) return Eigen::MatrixXcd(rows, 0);
  if (cols > rows) throw SingularChannelError("more users than antennas");

  // H P = Q R  =>  H (H^H H)^{-1} = Q R^{-H} P^T.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(channel);
  qr.setThreshold(1e-12);
  if (qr.rank() < cols) throw SingularChannelError("channel matrix is rank deficient");

  const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);
  const Eigen::MatrixXcd r = qr.matrixR().topLeftCorner(cols, cols).triangularView<Eigen::Upper>();
  // Q R^{-H}: solve R^H X^T ... equivalently X = Q (R^{-1})^H.
  const Eigen::MatrixXcd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXcd::Identity(cols, cols));
  const Eigen::MatrixXcd w_permuted = q * r_inv.adjoint();
  return w_permuted * qr.colsPermutation().transpose();
}

std::vector<Eigen::MatrixXcd> slice_rows(const Eigen::MatrixXcd& full, const ArrayGeometry& geometry) {
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(geometry.subarray_count());
  for (int s = 0; s < geometry.subarray_count(); ++s) {
    const auto slice = geometry.subarray(s);
    out.emplace_back(full.middleRows(slice.first, slice.size));
  }
  return out;
}

Eigen::MatrixXcd stack_rows(const std::vector<Eigen::MatrixXcd>& slices) {
  if (slices.empty()) return {};
  Eigen::Index rows = 0;
  for (const auto& s : slices) rows += s.rows();
  Eigen::MatrixXcd out(rows, slices.front().cols());
  Eigen::Index at = 0;
  for (const auto& s : slices) {
    out.middleRows(at, s.rows()) = s;
    at += s.rows();
  }
  return out;
}

std::vector<Eigen::MatrixXcd> zf_near(const Eigen::MatrixXcd& near_channel, const ArrayGeometry& geometry) {
  return slice_rows(zf_pseudo_inverse(near_channel), geometry);
}

std::vector<Eigen::MatrixXcd> zf_far(const Eigen::MatrixXcd& far_realization, const ArrayGeometry& geometry) {
  return slice_rows(zf_pseudo_inverse(far_realization), geometry);
}

std::vector<Eigen::VectorXcd> sensing_beamformer(const std::vector<Eigen::VectorXcd>& steering_slices) {
  std::vector<Eigen::VectorXcd> out;
  out.reserve(steering_slices.size());
  for (const auto& v : steering_slices) {
    const double norm = v.norm();
    if (!(norm > 0.0)) throw GeometryError("zero steering slice");
    out.emplace_back(v.conjugate() / norm);
  }
  return out;
}

PrecoderTraces precoder_traces(const PrecoderSet& precoders) {
  const int subarrays = static_cast<int>(precoders.sensing.size());
  const int kn = static_cast<int>(precoders.eta_near.size());
  const int kf = static_cast<int>(precoders.eta_far.size());
  PrecoderTraces t;
  t.near = Eigen::MatrixXd::Zero(subarrays, kn);
  t.far = Eigen::MatrixXd::Zero(subarrays, kf);
  t.sensing_norm2.resize(subarrays);
  for (int s = 0; s < subarrays; ++s) {
    for (int k = 0; k < kn; ++k) t.near(s, k) = precoders.near[s].col(k).squaredNorm();
    t.sensing_norm2(s) = precoders.sensing[s].squaredNorm();
  }
  if (kf > 0 && !precoders.far.empty()) {
    for (const auto& realization : precoders.far) {
      for (int s = 0; s < subarrays; ++s) {
        for (int j = 0; j < kf; ++j) t.far(s, j) += realization[s].col(j).squaredNorm();
      }
    }
    t.far /= static_cast<double>(precoders.far.size());
  }
  return t;
}

Eigen::VectorXd full_activation_gamma(const PowerCoefficients& eta, const PrecoderTraces& traces) {
  Eigen::VectorXd gamma = eta.eta_sense.cwiseProduct(traces.sensing_norm2);
  if (eta.eta_near.size() > 0) gamma += traces.near * eta.eta_near;
  if (eta.eta_far.size() > 0) gamma += traces.far * eta.eta_far;
  return gamma;
}

PowerCoefficients allocate_powers(const SystemConfig& config, const PrecoderTraces& traces) {
  const int subarrays = static_cast<int>(traces.sensing_norm2.size());
  const int kn = static_cast<int>(traces.near.cols());
  const int kf = static_cast<int>(traces.far.cols());
  const int users = kn + kf;
  const double pt = config.total_power_cap_W;
  const double ps = config.subarray_cap_W();

  PowerCoefficients eta;
  eta.eta_sense.resize(subarrays);
  const double sense_per_subarray = config.sensing_share * pt / subarrays;
  if (sense_per_subarray > ps) {
    throw ConfigError("per-subarray cap P_s is below the sensing share of P_t");
  }
  for (int s = 0; s < subarrays; ++s) {
    eta.eta_sense(s) = sense_per_subarray / traces.sensing_norm2(s);
  }

  const double per_user = users > 0 ? (1.0 - config.sensing_share) * pt / users : 0.0;
  eta.eta_near.resize(kn);
  for (int k = 0; k < kn; ++k) eta.eta_near(k) = per_user / traces.near.col(k).sum();
  eta.eta_far.resize(kf);
  for (int j = 0; j < kf; ++j) eta.eta_far(j) = per_user / traces.far.col(j).sum();

  const Eigen::VectorXd gamma = full_activation_gamma(eta, traces);
  double scale = std::numeric_limits<double>::infinity();
  if (gamma.sum() > 0.0) scale = pt / gamma.sum();
  for (int s = 0; s < subarrays; ++s) {
    if (gamma(s) > 0.0) scale = std::min(scale, ps / gamma(s));
  }
  if (!std::isfinite(scale)) scale = 1.0;
  eta.eta_sense *= scale;
  eta.eta_near *= scale;
  eta.eta_far *= scale;
  return eta;
}

PrecoderSet build_precoders(const ChannelSet& channels, const SteeringVector& steering,
                            const ArrayGeometry& geometry, const SystemConfig& config) {
  PrecoderSet p;
  p.near = zf_near(channels.near, geometry);
  p.far.reserve(channels.far_realizations.size());
  for (const auto& g : channels.far_realizations) p.far.push_back(zf_far(g, geometry));
  p.sensing = sensing_beamformer(steering.slices);
  p.eta_near = Eigen::VectorXd::Zero(channels.near.cols());
  p.eta_far = Eigen::VectorXd::Zero(channels.beta.size());
  p.eta_sense = Eigen::VectorXd::Zero(geometry.subarray_count());

  const PowerCoefficients eta = allocate_powers(config, precoder_traces(p));
  p.eta_near = eta.eta_near;
  p.eta_far = eta.eta_far;
  p.eta_sense = eta.eta_sense;
  return p;
}

}  // namespace elaa
