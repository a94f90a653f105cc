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

#include <complex>

#include "elaa/errors.hpp"
#include "elaa/metrics.hpp"
#include "test_support.hpp"

namespace elaa {
namespace {

using cd = std::complex<double>;

ActivationState random_state(RngStream& rng, int subarrays) {
  ActivationState s = ActivationState::all_off(subarrays);
  for (int i = 0; i < subarrays; ++i) {
    s.a_bar(i) = rng.uniform();
    s.a_tilde(i) = rng.uniform();
    s.a(i) = std::min(1.0, std::max(s.a_bar(i), s.a_tilde(i)) + 0.1 * rng.uniform());
  }
  return s;
}

// Brute-force re-summation straight from channels and precoders, one realization at a time.
struct Reference {
  const SystemModel& m;

  Eigen::VectorXcd g(int k, int s) const { return m.channels.near.col(k).segment(s * ms(), ms()); }
  Eigen::VectorXcd h(int r, int k, int s) const {
    return std::sqrt(m.channels.beta(k)) * m.channels.far_realizations[r].col(k).segment(s * ms(), ms());
  }
  int ms() const { return m.geometry.elements_per_subarray(); }
  int S() const { return m.subarray_count(); }
  int N() const { return static_cast<int>(m.channels.far_realizations.size()); }
  const PrecoderSet& p() const { return m.precoders; }

  double nfue(int k, const ActivationState& a) const {
    auto coherent = [&](int i) {
      cd sum = 0.0;
      for (int s = 0; s < S(); ++s) sum += a.a_bar(s) * g(k, s).dot(p().near[s].col(i));
      return std::norm(sum);
    };
    const double signal = p().eta_near(k) * coherent(k);
    double interference = m.config.noise_power_W;
    for (int i = 0; i < m.nfue_count(); ++i) if (i != k) interference += p().eta_near(i) * coherent(i);
    for (int j = 0; j < m.ffue_count(); ++j) {
      double acc = 0.0;
      for (int r = 0; r < N(); ++r) {
        cd sum = 0.0;
        for (int s = 0; s < S(); ++s) sum += a.a_tilde(s) * g(k, s).dot(p().far[r][s].col(j));
        acc += std::norm(sum);
      }
      interference += p().eta_far(j) * acc / N();
    }
    for (int s = 0; s < S(); ++s) {
      interference += p().eta_sense(s) * a.a(s) * a.a(s) * std::norm(g(k, s).dot(p().sensing[s]));
    }
    return signal / interference;
  }

  double ffue(int k, const ActivationState& a) const {
    cd mean = 0.0;
    double variance = 0.0;
    for (int s = 0; s < S(); ++s) {
      cd ms_sum = 0.0;
      double sq = 0.0;
      for (int r = 0; r < N(); ++r) {
        const cd x = h(r, k, s).dot(p().far[r][s].col(k));
        ms_sum += x;
        sq += std::norm(x);
      }
      const cd mu = ms_sum / static_cast<double>(N());
      mean += a.a_tilde(s) * mu;
      variance += a.a_tilde(s) * std::max(0.0, (sq - N() * std::norm(mu)) / (N() - 1));
    }
    const double signal = p().eta_far(k) * std::norm(mean);
    double interference = m.config.noise_power_W + p().eta_far(k) * variance;
    for (int s = 0; s < S(); ++s) {
      for (int i = 0; i < m.nfue_count(); ++i) {
        interference += a.a_bar(s) * a.a_bar(s) * p().eta_near(i) * m.channels.beta(k) * p().near[s].col(i).squaredNorm();
      }
      interference += m.channels.beta(k) * p().eta_sense(s) * a.a(s) * a.a(s) * p().sensing[s].squaredNorm();
    }
    for (int j = 0; j < m.ffue_count(); ++j) {
      if (j == k) continue;
      double acc = 0.0;
      for (int r = 0; r < N(); ++r) {
        cd sum = 0.0;
        for (int s = 0; s < S(); ++s) sum += a.a_tilde(s) * h(r, k, s).dot(p().far[r][s].col(j));
        acc += std::norm(sum);
      }
      interference += p().eta_far(j) * acc / N();
    }
    return signal / interference;
  }

  double beampattern(const ActivationState& a) const {
    const auto& v = m.steering.slices;
    auto tdot = [](const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) { return x.cwiseProduct(y).sum(); };
    double gain = 0.0;
    for (int k = 0; k < m.nfue_count(); ++k) {
      cd sum = 0.0;
      for (int s = 0; s < S(); ++s) sum += a.a_bar(s) * tdot(v[s], p().near[s].col(k));
      gain += p().eta_near(k) * std::norm(sum);
    }
    for (int j = 0; j < m.ffue_count(); ++j) {
      double acc = 0.0;
      for (int r = 0; r < N(); ++r) {
        cd sum = 0.0;
        for (int s = 0; s < S(); ++s) sum += a.a_tilde(s) * tdot(v[s], p().far[r][s].col(j));
        acc += std::norm(sum);
      }
      gain += p().eta_far(j) * acc / N();
    }
    for (int s = 0; s < S(); ++s) gain += p().eta_sense(s) * a.a(s) * a.a(s) * std::norm(tdot(v[s], p().sensing[s]));
    return gain;
  }

  double power(const ActivationState& a) const {
    double amp = 0.0;
    for (int s = 0; s < S(); ++s) {
      for (int k = 0; k < m.nfue_count(); ++k) amp += a.a_bar(s) * a.a_bar(s) * p().eta_near(k) * p().near[s].col(k).squaredNorm();
      for (int j = 0; j < m.ffue_count(); ++j) {
        double tr = 0.0;
        for (int r = 0; r < N(); ++r) tr += p().far[r][s].col(j).squaredNorm();
        amp += a.a_tilde(s) * a.a_tilde(s) * p().eta_far(j) * tr / N();
      }
      amp += a.a(s) * a.a(s) * p().eta_sense(s) * p().sensing[s].squaredNorm();
    }
    const SystemConfig& c = m.config;
    return amp / c.amplifier_efficiency + 2 * c.synthesizer_power_W + a.a.sum() * c.elements_per_subarray * c.rf_chain_power_W;
  }
};

class MetricsTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { model_ = new SystemModel(testing::small_model(4, 4, 4, 2, 2, 21, 32)); }
  static void TearDownTestSuite() { delete model_; }
  static SystemModel* model_;
};
SystemModel* MetricsTest::model_ = nullptr;

TEST_F(MetricsTest, SinrBeampatternAndPowerMatchBruteForce) {
  const Reference ref{*model_};
  RngStream rng(8, Stream::auxiliary);
  for (int trial = 0; trial < 25; ++trial) {
    const ActivationState a = trial == 0 ? ActivationState::all_on(4) : random_state(rng, 4);
    for (int k = 0; k < 2; ++k) {
      EXPECT_NEAR(nfue_sinr(*model_, k, a) / ref.nfue(k, a), 1.0, 1e-9);
      EXPECT_NEAR(ffue_sinr(*model_, k, a) / ref.ffue(k, a), 1.0, 1e-9);
    }
    EXPECT_NEAR(beampattern_gain(*model_, a) / ref.beampattern(a), 1.0, 1e-9);
    EXPECT_NEAR(total_power(*model_, a), ref.power(a), 1e-12);
  }
}

TEST_F(MetricsTest, FullActivationIntraGroupInterferenceVanishes) {
  const auto& gain = model_->moments.nfue_gain;
  for (int k = 0; k < 2; ++k) {
    const double signal = std::norm(gain[k].col(k).sum());
    for (int i = 0; i < 2; ++i) {
      if (i != k) EXPECT_LE(std::norm(gain[k].col(i).sum()), 1e-12 * signal);
    }
    // Global ZF: the coherent sum of per-subarray gains is exactly one.
    EXPECT_NEAR(std::abs(gain[k].col(k).sum() - cd(1.0, 0.0)), 0.0, 1e-9);
  }
}

TEST_F(MetricsTest, AllOffPowerIsTwiceSynthesizer) {
  EXPECT_DOUBLE_EQ(total_power(*model_, ActivationState::all_off(4)), 0.1);
  EXPECT_DOUBLE_EQ(beampattern_gain(*model_, ActivationState::all_off(4)), 0.0);
}

TEST_F(MetricsTest, AllOnPowerFollowsClosedForm) {
  const PowerBreakdown b = power_breakdown(*model_, ActivationState::all_on(4));
  const SystemConfig& c = model_->config;
  EXPECT_LE(b.gamma.sum(), c.total_power_cap_W * (1 + 1e-12));
  EXPECT_NEAR(b.total_W, b.gamma.sum() / c.amplifier_efficiency + 2 * c.synthesizer_power_W +
                             c.subarray_count * c.elements_per_subarray * c.rf_chain_power_W, 1e-12);
}

TEST_F(MetricsTest, PowerIsMonotoneInEveryCoordinate) {
  RngStream rng(9, Stream::auxiliary);
  for (int trial = 0; trial < 1000; ++trial) {
    const ActivationState a = random_state(rng, 4);
    ActivationState b = a;
    const int which = static_cast<int>(rng.below(3));
    const int s = static_cast<int>(rng.below(4));
    Eigen::VectorXd& v = which == 0 ? b.a_bar : which == 1 ? b.a_tilde : b.a;
    v(s) = v(s) + (1.0 - v(s)) * rng.uniform();
    EXPECT_GE(total_power(*model_, b), total_power(*model_, a));
  }
}

TEST_F(MetricsTest, QosTargetsScaleWithFraction) {
  const QoSTargets t = derive_qos_targets(*model_);
  const ActivationState on = ActivationState::all_on(4);
  for (int k = 0; k < 2; ++k) {
    EXPECT_NEAR(t.r_bar(k), 0.7 * nfue_sinr(*model_, k, on), 1e-15 * t.r_bar(k) * 10);
    EXPECT_NEAR(t.r_tilde(k), 0.7 * ffue_sinr(*model_, k, on), 1e-15 * t.r_tilde(k) * 10);
  }
  EXPECT_NEAR(t.kappa, 0.7 * beampattern_gain(*model_, on), 1e-14 * t.kappa);

  SystemModel full = *model_;
  full.config.qos_fraction = 1.0;
  const ConstraintAudit audit = audit_constraints(full, derive_qos_targets(full), on);
  EXPECT_TRUE(audit.feasible);
  EXPECT_NEAR(audit.beampattern_slack, 0.0, 1e-12 * audit.beampattern);
}

TEST_F(MetricsTest, AuditFlagsViolations) {
  const QoSTargets t = derive_qos_targets(*model_);
  EXPECT_TRUE(audit_constraints(*model_, t, ActivationState::all_on(4)).feasible);
  const ConstraintAudit off = audit_constraints(*model_, t, ActivationState::all_off(4));
  EXPECT_FALSE(off.feasible);
  EXPECT_LT(off.beampattern_slack, 0.0);
}

TEST(Metrics, ActivationStateHelpers) {
  const ActivationState s = ActivationState::from_binary(Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(1, 1, 0));
  EXPECT_EQ(s.a, Eigen::Vector3d(1, 1, 0));
  EXPECT_TRUE(s.is_binary());
  EXPECT_EQ(s.active_count(), 2);
  EXPECT_EQ(ActivationState::from_stacked(s.stacked()), s);
  ActivationState half = ActivationState::all_on(3);
  half.a_tilde(1) = 0.3;
  EXPECT_DOUBLE_EQ(half.binarity_gap(), 0.3);
}

TEST(Metrics, EstimationNeedsTwoRealizations) {
  SystemConfig c = testing::small_config(4, 4, 4, 1, 1, 2, 2);
  const ArrayGeometry g = ArrayGeometry::from_config(c);
  ChannelSet ch = build_channels(g, c);
  const SteeringVector v = steering_vector(g, c, *c.target);
  PrecoderSet p = build_precoders(ch, v, g, c);
  ch.far_realizations.pop_back();
  p.far.pop_back();
  EXPECT_THROW(estimate_second_moments(ch, v, p, g), EstimationError);
}

TEST(Metrics, NoFarUsersLeavesFarTermsEmpty) {
  const SystemModel m = testing::small_model(4, 4, 4, 2, 0, 5, 4);
  const ActivationState on = ActivationState::all_on(4);
  EXPECT_GT(nfue_sinr(m, 0, on), 0.0);
  EXPECT_EQ(derive_qos_targets(m).r_tilde.size(), 0);
}

}  // namespace
}  // namespace elaa
