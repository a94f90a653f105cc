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

#include "elaa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "elaa/errors.hpp"

namespace elaa {

namespace {

using cd = std::complex<double>;

cd weighted_sum(const Eigen::VectorXcd& c, const Eigen::VectorXd& x) {
  return (c.array() * x.array().cast<cd>()).sum();
}

// x^T C x for real x and Hermitian C; only the real part survives.
double hermitian_form(const Eigen::MatrixXcd& c, const Eigen::VectorXd& x) {
  return x.dot(c.real() * x);
}

cd transpose_dot(const Eigen::VectorXcd& v, const Eigen::VectorXcd& w) {
  return v.cwiseProduct(w).sum();
}

}  // namespace

ActivationState ActivationState::all_on(int subarrays) {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(subarrays);
  return {ones, ones, ones};
}

ActivationState ActivationState::all_off(int subarrays) {
  const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(subarrays);
  return {zeros, zeros, zeros};
}

ActivationState ActivationState::from_binary(const Eigen::VectorXd& a_bar, const Eigen::VectorXd& a_tilde) {
  return {a_bar, a_tilde, (a_bar + a_tilde).cwiseMin(1.0)};
}

bool ActivationState::is_binary(double tol) const {
  return binarity_gap() <= tol;
}

double ActivationState::binarity_gap() const {
  double gap = 0.0;
  for (const Eigen::VectorXd* v : {&a_bar, &a_tilde, &a}) {
    for (Eigen::Index s = 0; s < v->size(); ++s) {
      gap = std::max(gap, std::min((*v)(s), 1.0 - (*v)(s)));
    }
  }
  return gap;
}

int ActivationState::active_count() const {
  return static_cast<int>((a.array() >= 0.5).count());
}

Eigen::VectorXd ActivationState::stacked() const {
  Eigen::VectorXd x(3 * a.size());
  x << a_bar, a_tilde, a;
  return x;
}

ActivationState ActivationState::from_stacked(const Eigen::VectorXd& x) {
  const Eigen::Index s = x.size() / 3;
  return {x.segment(0, s), x.segment(s, s), x.segment(2 * s, s)};
}

SecondMoments estimate_second_moments(const ChannelSet& channels, const SteeringVector& steering,
                                      const PrecoderSet& precoders, const ArrayGeometry& geometry) {
  const int n = static_cast<int>(channels.far_realizations.size());
  if (n < 2) throw EstimationError("second-moment estimation needs at least two far-field realizations");
  if (precoders.far.size() != channels.far_realizations.size()) {
    throw EstimationError("far precoders do not match the channel realizations");
  }
  const int subarrays = geometry.subarray_count();
  const int kn = static_cast<int>(channels.near.cols());
  const int kf = static_cast<int>(channels.beta.size());

  SecondMoments m;
  m.realizations = n;
  m.beta = channels.beta;

  auto near_slice = [&](int k, int s) -> Eigen::VectorXcd {
    return subarray_view(channels.near.col(k), geometry.subarray(s));
  };

  // Deterministic near-field terms.
  m.nfue_gain.assign(kn, Eigen::MatrixXcd::Zero(subarrays, kn));
  m.nfue_sense_leak.assign(kn, Eigen::VectorXd::Zero(subarrays));
  m.beam_near.assign(kn, Eigen::VectorXcd::Zero(subarrays));
  m.beam_sense.resize(subarrays);
  for (int s = 0; s < subarrays; ++s) {
    const Eigen::VectorXcd& w_sense = precoders.sensing[s];
    m.beam_sense(s) = std::norm(transpose_dot(steering.slices[s], w_sense));
    for (int k = 0; k < kn; ++k) {
      const Eigen::VectorXcd g = near_slice(k, s);
      for (int i = 0; i < kn; ++i) m.nfue_gain[k](s, i) = g.dot(precoders.near[s].col(i));
      m.nfue_sense_leak[k](s) = std::norm(g.dot(w_sense));
      m.beam_near[k](s) = transpose_dot(steering.slices[s], precoders.near[s].col(k));
    }
  }

  const PrecoderTraces traces = precoder_traces(precoders);
  m.psi_near = traces.near;
  m.psi_far = traces.far;
  m.sensing_norm2 = traces.sensing_norm2;

  m.t.assign(kf, Eigen::MatrixXd::Zero(subarrays, kn));
  for (int k = 0; k < kf; ++k) m.t[k] = channels.beta(k) * traces.near;

  // Far-field sample moments, accumulated in realization order.
  m.rho.assign(kn, std::vector<Eigen::MatrixXcd>(kf, Eigen::MatrixXcd::Zero(subarrays, subarrays)));
  m.varrho.assign(kf, std::vector<Eigen::MatrixXcd>(kf, Eigen::MatrixXcd::Zero(subarrays, subarrays)));
  m.beam_far.assign(kf, Eigen::MatrixXcd::Zero(subarrays, subarrays));
  std::vector<Eigen::VectorXcd> mean_sum(kf, Eigen::VectorXcd::Zero(subarrays));
  std::vector<Eigen::VectorXd> square_sum(kf, Eigen::VectorXd::Zero(subarrays));

  Eigen::VectorXcd u(subarrays);
  for (int r = 0; r < n; ++r) {
    const Eigen::MatrixXcd& h = channels.far_realizations[r];
    const auto& w = precoders.far[r];
    for (int j = 0; j < kf; ++j) {
      for (int k = 0; k < kn; ++k) {
        for (int s = 0; s < subarrays; ++s) u(s) = near_slice(k, s).dot(w[s].col(j));
        m.rho[k][j].noalias() += u * u.adjoint();
      }
      for (int k = 0; k < kf; ++k) {
        const double amplitude = std::sqrt(channels.beta(k));
        for (int s = 0; s < subarrays; ++s) {
          u(s) = amplitude * subarray_view(h.col(k), geometry.subarray(s)).dot(w[s].col(j));
        }
        m.varrho[k][j].noalias() += u * u.adjoint();
        if (j == k) {
          mean_sum[k] += u;
          square_sum[k] += u.cwiseAbs2();
        }
      }
      for (int s = 0; s < subarrays; ++s) u(s) = transpose_dot(steering.slices[s], w[s].col(j));
      m.beam_far[j].noalias() += u * u.adjoint();
    }
  }

  const double inv_n = 1.0 / n;
  for (auto& row : m.rho) for (auto& x : row) x *= inv_n;
  for (auto& row : m.varrho) for (auto& x : row) x *= inv_n;
  for (auto& x : m.beam_far) x *= inv_n;
  m.ffue_mean.resize(kf);
  m.eps.resize(kf);
  for (int k = 0; k < kf; ++k) {
    m.ffue_mean[k] = mean_sum[k] * inv_n;
    // Unbiased sample variance; clamp rounding noise at zero.
    m.eps[k] = ((square_sum[k] - n * m.ffue_mean[k].cwiseAbs2()) / (n - 1)).cwiseMax(0.0);
  }
  return m;
}

SystemModel build_system_model(const SystemConfig& config) {
  config.validate();
  if (!config.placements_resolved()) throw ConfigError("placements must be resolved before building a model");
  ArrayGeometry geometry = ArrayGeometry::from_config(config);
  ChannelSet channels = build_channels(geometry, config);
  SteeringVector steering = steering_vector(geometry, config, *config.target);
  PrecoderSet precoders = build_precoders(channels, steering, geometry, config);
  SecondMoments moments = estimate_second_moments(channels, steering, precoders, geometry);
  return SystemModel{config, std::move(geometry), std::move(channels), std::move(steering),
                     std::move(precoders), std::move(moments)};
}

double nfue_sinr(const SystemModel& model, int k, const ActivationState& state) {
  const SecondMoments& m = model.moments;
  const PrecoderSet& p = model.precoders;
  const Eigen::MatrixXcd& gain = m.nfue_gain[k];

  const double signal = p.eta_near(k) * std::norm(weighted_sum(gain.col(k), state.a_bar));
  double interference = 0.0;
  for (int i = 0; i < model.nfue_count(); ++i) {
    if (i != k) interference += p.eta_near(i) * std::norm(weighted_sum(gain.col(i), state.a_bar));
  }
  for (int j = 0; j < model.ffue_count(); ++j) {
    interference += p.eta_far(j) * hermitian_form(m.rho[k][j], state.a_tilde);
  }
  interference += (p.eta_sense.array() * state.a.array().square() * m.nfue_sense_leak[k].array()).sum();
  return signal / (interference + model.config.noise_power_W);
}

double ffue_sinr(const SystemModel& model, int k, const ActivationState& state) {
  const SecondMoments& m = model.moments;
  const PrecoderSet& p = model.precoders;

  const double signal = p.eta_far(k) * std::norm(weighted_sum(m.ffue_mean[k], state.a_tilde));
  double interference = p.eta_far(k) * state.a_tilde.dot(m.eps[k]);
  if (model.nfue_count() > 0) {
    interference += state.a_bar.array().square().matrix().dot(m.t[k] * p.eta_near);
  }
  for (int j = 0; j < model.ffue_count(); ++j) {
    if (j != k) interference += p.eta_far(j) * hermitian_form(m.varrho[k][j], state.a_tilde);
  }
  interference += m.beta(k) * (p.eta_sense.array() * state.a.array().square() * m.sensing_norm2.array()).sum();
  return signal / (interference + model.config.noise_power_W);
}

double beampattern_gain(const SystemModel& model, const ActivationState& state) {
  const SecondMoments& m = model.moments;
  const PrecoderSet& p = model.precoders;
  double gain = 0.0;
  for (int k = 0; k < model.nfue_count(); ++k) {
    gain += p.eta_near(k) * std::norm(weighted_sum(m.beam_near[k], state.a_bar));
  }
  for (int j = 0; j < model.ffue_count(); ++j) {
    gain += p.eta_far(j) * hermitian_form(m.beam_far[j], state.a_tilde);
  }
  gain += (p.eta_sense.array() * state.a.array().square() * m.beam_sense.array()).sum();
  return gain;
}

PowerBreakdown power_breakdown(const SystemModel& model, const ActivationState& state) {
  const SecondMoments& m = model.moments;
  const PrecoderSet& p = model.precoders;
  const SystemConfig& c = model.config;

  PowerBreakdown out;
  out.gamma = state.a.array().square() * p.eta_sense.array() * m.sensing_norm2.array();
  if (model.nfue_count() > 0) out.gamma.array() += state.a_bar.array().square() * (m.psi_near * p.eta_near).array();
  if (model.ffue_count() > 0) out.gamma.array() += state.a_tilde.array().square() * (m.psi_far * p.eta_far).array();
  out.amplifier_W = out.gamma.sum() / c.amplifier_efficiency;
  out.synthesizer_W = 2.0 * c.synthesizer_power_W;
  out.circuit_W = state.a.sum() * c.elements_per_subarray * c.rf_chain_power_W;
  out.total_W = out.amplifier_W + out.synthesizer_W + out.circuit_W;
  return out;
}

double total_power(const SystemModel& model, const ActivationState& state) {
  return power_breakdown(model, state).total_W;
}

QoSTargets derive_qos_targets(const SystemModel& model) {
  const ActivationState on = ActivationState::all_on(model.subarray_count());
  const double fraction = model.config.qos_fraction;
  QoSTargets q;
  q.r_bar.resize(model.nfue_count());
  for (int k = 0; k < model.nfue_count(); ++k) q.r_bar(k) = fraction * nfue_sinr(model, k, on);
  q.r_tilde.resize(model.ffue_count());
  for (int k = 0; k < model.ffue_count(); ++k) q.r_tilde(k) = fraction * ffue_sinr(model, k, on);
  q.kappa = fraction * beampattern_gain(model, on);
  return q;
}

ConstraintAudit audit_constraints(const SystemModel& model, const QoSTargets& targets,
                                  const ActivationState& state, double tol) {
  ConstraintAudit a;
  bool ok = true;
  a.nfue_sinr.resize(model.nfue_count());
  a.nfue_slack.resize(model.nfue_count());
  for (int k = 0; k < model.nfue_count(); ++k) {
    a.nfue_sinr(k) = nfue_sinr(model, k, state);
    a.nfue_slack(k) = a.nfue_sinr(k) - targets.r_bar(k);
    ok = ok && a.nfue_sinr(k) >= targets.r_bar(k) * (1.0 - tol);
  }
  a.ffue_sinr.resize(model.ffue_count());
  a.ffue_slack.resize(model.ffue_count());
  for (int k = 0; k < model.ffue_count(); ++k) {
    a.ffue_sinr(k) = ffue_sinr(model, k, state);
    a.ffue_slack(k) = a.ffue_sinr(k) - targets.r_tilde(k);
    ok = ok && a.ffue_sinr(k) >= targets.r_tilde(k) * (1.0 - tol);
  }
  a.beampattern = beampattern_gain(model, state);
  a.beampattern_slack = a.beampattern - targets.kappa;
  ok = ok && a.beampattern >= targets.kappa * (1.0 - tol);

  a.power = power_breakdown(model, state);
  const double pt = model.config.total_power_cap_W;
  const double ps = model.config.subarray_cap_W();
  a.total_power_slack = pt - a.power.gamma.sum();
  ok = ok && a.power.gamma.sum() <= pt * (1.0 + tol);
  a.subarray_power_slack = (ps - a.power.gamma.array()).matrix();
  ok = ok && (a.power.gamma.array() <= ps * (1.0 + tol)).all();
  a.feasible = ok;
  return a;
}

namespace {
std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

std::vector<double> to_db(const Eigen::VectorXd& v) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(10.0 * std::log10(v(i)));
  return out;
}
}  // namespace

nlohmann::json activation_to_json(const ActivationState& state) {
  return {{"a_bar", to_std(state.a_bar)}, {"a_tilde", to_std(state.a_tilde)}, {"a", to_std(state.a)}};
}

nlohmann::json audit_to_json(const ConstraintAudit& audit) {
  nlohmann::json j;
  j["feasible"] = audit.feasible;
  j["nfue_sinr_dB"] = to_db(audit.nfue_sinr);
  j["ffue_sinr_dB"] = to_db(audit.ffue_sinr);
  j["nfue_slack"] = to_std(audit.nfue_slack);
  j["ffue_slack"] = to_std(audit.ffue_slack);
  j["beampattern_gain"] = audit.beampattern;
  j["beampattern_slack"] = audit.beampattern_slack;
  j["total_power_slack_W"] = audit.total_power_slack;
  j["subarray_power_slack_W"] = to_std(audit.subarray_power_slack);
  j["power"] = {
      {"gamma_W", to_std(audit.power.gamma)},
      {"amplifier_W", audit.power.amplifier_W},
      {"synthesizer_W", audit.power.synthesizer_W},
      {"circuit_W", audit.power.circuit_W},
      {"total_W", audit.power.total_W},
  };
  return j;
}

}  // namespace elaa
