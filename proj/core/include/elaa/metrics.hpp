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
#include <nlohmann/json.hpp>

#include "elaa/config.hpp"
#include "elaa/precoding.hpp"
#include "elaa/scene.hpp"

namespace elaa {

// Per-subarray activation levels: a_bar serves NFUEs, a_tilde serves FFUEs, a powers the RF chain.
struct ActivationState {
  Eigen::VectorXd a_bar;
  Eigen::VectorXd a_tilde;
  Eigen::VectorXd a;

  static ActivationState all_on(int subarrays);
  static ActivationState all_off(int subarrays);
  // a = min(1, a_bar + a_tilde).
  static ActivationState from_binary(const Eigen::VectorXd& a_bar, const Eigen::VectorXd& a_tilde);

  int subarray_count() const noexcept { return static_cast<int>(a.size()); }
  bool is_binary(double tol = 0.0) const;
  // max over all three vectors of min(v, 1 - v).
  double binarity_gap() const;
  int active_count() const;

  // Stacked as [a_bar; a_tilde; a].
  Eigen::VectorXd stacked() const;
  static ActivationState from_stacked(const Eigen::VectorXd& x);

  friend bool operator==(const ActivationState& l, const ActivationState& r) {
    return l.a_bar == r.a_bar && l.a_tilde == r.a_tilde && l.a == r.a;
  }
};

// Every expectation over far-field ZF realizations, replaced by sample means, plus the
// deterministic near-field inner products the metrics need. Indices: k user of the
// group being evaluated, i/j interferers, s/s' subarrays.
struct SecondMoments {
  int realizations = 0;

  // NFUE side
  std::vector<Eigen::MatrixXcd> nfue_gain;  // [k] S x K_N, (s, i) = g_sk^H w_si
  std::vector<std::vector<Eigen::MatrixXcd>> rho;  // [k][j] S x S, g_sk^H E{w_sj w_s'j^H} g_s'k
  std::vector<Eigen::VectorXd> nfue_sense_leak;    // [k] S, |g_sk^H w_s^r|^2

  // FFUE side
  std::vector<Eigen::VectorXcd> ffue_mean;  // [k] S, E{g~_sk^H w~_sk}
  std::vector<Eigen::VectorXd> eps;         // [k] S, variance of g~_sk^H w~_sk
  std::vector<Eigen::MatrixXd> t;           // [k] S x K_N, (s, i) = beta_k ||w_si||^2
  std::vector<std::vector<Eigen::MatrixXcd>> varrho;  // [k][j] S x S

  // Beampattern
  std::vector<Eigen::VectorXcd> beam_near;  // [k] S, v_s^T w_sk
  std::vector<Eigen::MatrixXcd> beam_far;   // [j] S x S, E{(v_s^T w~_sj)(v_s'^T w~_s'j)^*}
  Eigen::VectorXd beam_sense;               // S, |v_s^T w_s^r|^2

  // Power traces
  Eigen::MatrixXd psi_near;      // S x K_N
  Eigen::MatrixXd psi_far;       // S x K_F
  Eigen::VectorXd sensing_norm2;  // S
  Eigen::VectorXd beta;           // K_F
};

struct QoSTargets {
  Eigen::VectorXd r_bar;    // linear SINR floors, NFUE
  Eigen::VectorXd r_tilde;  // linear SINR floors, FFUE
  double kappa = 0.0;       // beampattern floor
};

// Everything needed to evaluate a scenario; immutable once built.
struct SystemModel {
  SystemConfig config;
  ArrayGeometry geometry;
  ChannelSet channels;
  SteeringVector steering;
  PrecoderSet precoders;
  SecondMoments moments;

  int subarray_count() const noexcept { return geometry.subarray_count(); }
  int nfue_count() const noexcept { return config.nfue_count; }
  int ffue_count() const noexcept { return config.ffue_count; }
};

// Config must have resolved placements.
SystemModel build_system_model(const SystemConfig& config);

// Throws EstimationError with fewer than two realizations.
SecondMoments estimate_second_moments(const ChannelSet& channels, const SteeringVector& steering,
                                      const PrecoderSet& precoders, const ArrayGeometry& geometry);

double nfue_sinr(const SystemModel& model, int k, const ActivationState& state);
double ffue_sinr(const SystemModel& model, int k, const ActivationState& state);
double beampattern_gain(const SystemModel& model, const ActivationState& state);

struct PowerBreakdown {
  Eigen::VectorXd gamma;  // per-subarray transmit power
  double amplifier_W = 0.0;
  double synthesizer_W = 0.0;
  double circuit_W = 0.0;
  double total_W = 0.0;
};

PowerBreakdown power_breakdown(const SystemModel& model, const ActivationState& state);
double total_power(const SystemModel& model, const ActivationState& state);

QoSTargets derive_qos_targets(const SystemModel& model);

// Exact-metric check of every activation constraint. Slacks are value - floor for QoS
// rows and cap - value for power rows; feasibility allows a relative tolerance.
struct ConstraintAudit {
  Eigen::VectorXd nfue_sinr;
  Eigen::VectorXd ffue_sinr;
  double beampattern = 0.0;
  PowerBreakdown power;
  Eigen::VectorXd nfue_slack;
  Eigen::VectorXd ffue_slack;
  double beampattern_slack = 0.0;
  double total_power_slack = 0.0;
  Eigen::VectorXd subarray_power_slack;
  bool feasible = false;
};

inline constexpr double kAuditTolerance = 1e-9;

ConstraintAudit audit_constraints(const SystemModel& model, const QoSTargets& targets,
                                  const ActivationState& state, double tol = kAuditTolerance);

nlohmann::json audit_to_json(const ConstraintAudit& audit);
nlohmann::json activation_to_json(const ActivationState& state);

}  // namespace elaa
