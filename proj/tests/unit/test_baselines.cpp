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

#include "elaa/baselines.hpp"
#include "elaa/errors.hpp"
#include "test_support.hpp"

namespace elaa {
namespace {

using testing::small_model;

TEST(Baselines, AllSubarraysPowerFormula) {
  const SystemModel m = small_model(8, 4, 4, 1, 2, 3);
  const BaselineResult r = all_subarrays(m, derive_qos_targets(m));
  const SystemConfig& c = m.config;
  const PowerBreakdown p = power_breakdown(m, ActivationState::all_on(m.subarray_count()));
  const double expected = p.gamma.sum() / c.amplifier_efficiency +
                          m.subarray_count() * c.elements_per_subarray * c.rf_chain_power_W +
                          2 * c.synthesizer_power_W;
  EXPECT_NEAR(r.power_W, expected, 1e-12);
  EXPECT_TRUE(r.feasible);
  EXPECT_EQ(r.scheme, Scheme::all_subarrays);
  EXPECT_EQ(r.activation.active_count(), m.subarray_count());
}

TEST(Baselines, RandomWithFullStartEqualsAllOn) {
  const SystemModel m = small_model(4, 4, 4, 1, 1, 4);
  const QoSTargets t = derive_qos_targets(m);
  RngStream rng(4, Stream::random_baseline);
  const BaselineResult r = random_activation(m, t, rng, m.subarray_count());
  EXPECT_EQ(r.activation, ActivationState::all_on(m.subarray_count()));
  EXPECT_DOUBLE_EQ(r.power_W, all_subarrays(m, t).power_W);
}

TEST(Baselines, RandomIsSeededFeasibleAndAligned) {
  const SystemModel m = small_model(8, 8, 8, 1, 1, 5);
  const QoSTargets t = derive_qos_targets(m);
  for (int n = 1; n <= m.subarray_count(); ++n) {
    RngStream a(17, Stream::random_baseline), b(17, Stream::random_baseline);
    const BaselineResult ra = random_activation(m, t, a, n);
    const BaselineResult rb = random_activation(m, t, b, n);
    EXPECT_EQ(ra.activation, rb.activation);
    EXPECT_TRUE(ra.feasible);
    EXPECT_GE(ra.activation.active_count(), n);
    EXPECT_EQ(ra.activation.a_bar, ra.activation.a_tilde);
    EXPECT_EQ(ra.activation.a_bar, ra.activation.a);
  }
  RngStream r(1, Stream::random_baseline);
  EXPECT_THROW(random_activation(m, t, r, 0), ConfigError);
  EXPECT_THROW(random_activation(m, t, r, m.subarray_count() + 1), ConfigError);
}

TEST(Baselines, OracleMatchesIndependentEnumeration) {
  const SystemModel m = small_model(6, 2, 4, 1, 1, 6);
  ASSERT_EQ(m.subarray_count(), 3);
  const QoSTargets t = derive_qos_targets(m);
  const BaselineResult r = exhaustive_oracle(m, t);
  EXPECT_EQ(r.evaluations, 64);
  ASSERT_TRUE(r.feasible);
  double best = INFINITY;
  for (int code = 0; code < 64; ++code) {
    Eigen::VectorXd bar(3), tilde(3);
    for (int s = 0; s < 3; ++s) {
      bar(s) = (code >> s) & 1;
      tilde(s) = (code >> (s + 3)) & 1;
    }
    const ActivationState st = ActivationState::from_binary(bar, tilde);
    if (audit_constraints(m, t, st).feasible) best = std::min(best, total_power(m, st));
  }
  EXPECT_DOUBLE_EQ(r.power_W, best);
  EXPECT_LE(r.power_W, all_subarrays(m, t).power_W);
}

TEST(Baselines, OracleExtremes) {
  const SystemModel m = small_model(4, 4, 4, 1, 1, 7);
  QoSTargets zero;
  zero.r_bar = zero.r_tilde = Eigen::VectorXd::Zero(1);
  const BaselineResult off = exhaustive_oracle(m, zero);
  EXPECT_EQ(off.activation, ActivationState::all_off(4));
  EXPECT_NEAR(off.power_W, 2 * m.config.synthesizer_power_W, 1e-15);
  EXPECT_EQ(off.evaluations, 256);

  SystemConfig c = testing::small_config(4, 4, 4, 1, 1, 7);
  c.qos_fraction = 1.0;
  const SystemModel full = build_system_model(c);
  EXPECT_EQ(exhaustive_oracle(full, derive_qos_targets(full)).activation, ActivationState::all_on(4));
}

TEST(Baselines, OracleRefusesLargeInstances) {
  const SystemModel m = small_model(13, 1, 1, 1, 1, 8, 8);
  ASSERT_EQ(m.subarray_count(), 13);
  EXPECT_THROW(exhaustive_oracle(m, derive_qos_targets(m)), SizeError);
}

TEST(Baselines, JsonNamesScheme) {
  const SystemModel m = small_model(4, 4, 4, 1, 1, 9);
  const nlohmann::json j = baseline_to_json(all_subarrays(m, derive_qos_targets(m)));
  EXPECT_EQ(j["scheme"], to_string(Scheme::all_subarrays));
  EXPECT_TRUE(j["feasible"].get<bool>());
}

}  // namespace
}  // namespace elaa
