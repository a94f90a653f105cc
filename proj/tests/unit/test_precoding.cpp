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


#include <gtest/gtest.h>

#include "elaa/errors.hpp"
#include "elaa/precoding.hpp"
#include "test_support.hpp"

namespace elaa {
namespace {

Eigen::MatrixXcd random_channel(RngStream& rng, int rows, int cols) { return sample_far_field(rng, rows, cols); }

TEST(Precoding, ZeroForcingInvertsChannelAcrossRandomDraws) {
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    RngStream rng(trial, Stream::auxiliary);
    const int users = 1 + static_cast<int>(rng.below(6));
    const Eigen::MatrixXcd h = random_channel(rng, 16, users);
    const Eigen::MatrixXcd w = zf_pseudo_inverse(h);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(users, users);
    EXPECT_LT((h.adjoint() * w - id).cwiseAbs().maxCoeff(), 1e-9) << "trial " << trial;
  }
}

TEST(Precoding, ZeroForcingMatchesNormalEquations) {
  RngStream rng(2, Stream::auxiliary);
  const Eigen::MatrixXcd h = random_channel(rng, 8, 3);
  const Eigen::MatrixXcd expected = h * (h.adjoint() * h).inverse();
  EXPECT_LT((zf_pseudo_inverse(h) - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Precoding, SingularChannelsAreRejected) {
  RngStream rng(3, Stream::auxiliary);
  Eigen::MatrixXcd h = random_channel(rng, 8, 2);
  h.col(1) = 2.0 * h.col(0);
  EXPECT_THROW(zf_pseudo_inverse(h), SingularChannelError);
  EXPECT_THROW(zf_pseudo_inverse(random_channel(rng, 2, 3)), SingularChannelError);
}

TEST(Precoding, SlicesReassembleTheFullPrecoder) {
  RngStream rng(4, Stream::auxiliary);
  const ArrayGeometry g(4, 4, 4, 0.005);
  const Eigen::MatrixXcd h = random_channel(rng, 16, 2);
  const auto slices = zf_near(h, g);
  ASSERT_EQ(slices.size(), 4u);
  EXPECT_EQ(stack_rows(slices), zf_pseudo_inverse(h));
  // Summing the per-subarray effective gains recovers the identity.
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(2, 2);
  for (int s = 0; s < 4; ++s) sum += h.middleRows(4 * s, 4).adjoint() * slices[s];
  EXPECT_LT((sum - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Precoding, SensingBeamformerIsUnitNormMatchedFilter) {
  RngStream rng(5, Stream::auxiliary);
  std::vector<Eigen::VectorXcd> v{random_channel(rng, 4, 1).col(0), random_channel(rng, 4, 1).col(0)};
  const auto w = sensing_beamformer(v);
  for (std::size_t s = 0; s < v.size(); ++s) {
    EXPECT_NEAR(w[s].norm(), 1.0, 1e-15);
    // v^T w = ||v|| (real, positive): the largest value over unit-norm w.
    const std::complex<double> gain = v[s].cwiseProduct(w[s]).sum();
    EXPECT_NEAR(gain.real(), v[s].norm(), 1e-14);
    EXPECT_NEAR(gain.imag(), 0.0, 1e-14);
  }
  EXPECT_THROW(sensing_beamformer({Eigen::VectorXcd::Zero(4)}), GeometryError);
}

TEST(Precoding, PowerAllocationMeetsCapsAndSplit) {
  const SystemModel m = testing::small_model(8, 8, 8, 2, 2, 1);
  const PrecoderTraces traces = precoder_traces(m.precoders);
  const PowerCoefficients eta{m.precoders.eta_near, m.precoders.eta_far, m.precoders.eta_sense};
  const Eigen::VectorXd gamma = full_activation_gamma(eta, traces);
  const double pt = m.config.total_power_cap_W;
  EXPECT_LE(gamma.sum(), pt * (1 + 1e-12));
  EXPECT_LE(gamma.maxCoeff(), m.config.subarray_cap_W() * (1 + 1e-12));
  // One of the caps is active after scaling.
  const double total_ratio = gamma.sum() / pt;
  const double sub_ratio = gamma.maxCoeff() / m.config.subarray_cap_W();
  EXPECT_NEAR(std::max(total_ratio, sub_ratio), 1.0, 1e-12);
  // Sensing share and per-user equality survive the common scaling.
  const double sensing = (eta.eta_sense.array() * traces.sensing_norm2.array()).sum();
  EXPECT_NEAR(sensing / gamma.sum(), m.config.sensing_share, 1e-12);
  for (int k = 0; k < 2; ++k) {
    const double user_near = eta.eta_near(k) * traces.near.col(k).sum();
    const double user_far = eta.eta_far(k) * traces.far.col(k).sum();
    EXPECT_NEAR(user_near / gamma.sum(), 0.7 / 4, 1e-12);
    EXPECT_NEAR(user_far / gamma.sum(), 0.7 / 4, 1e-12);
  }
}

TEST(Precoding, SensingShareAboveSubarrayCapIsRejected) {
  SystemConfig c = testing::small_config(4, 4, 4, 1, 1, 2);
  c.sensing_share = 1.0;
  c.subarray_power_cap_W = 0.1;  // 1.0 * P_t / S = 0.25 > 0.1
  EXPECT_THROW(build_system_model(c), ConfigError);
}

}  // namespace
}  // namespace elaa
