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

#include "elaa/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "elaa/errors.hpp"
#include "elaa/surrogate.hpp"

namespace elaa {

namespace {

struct Layout {
  int subarrays;
  int bar() const { return 0; }
  int tilde() const { return subarrays; }
  int act() const { return 2 * subarrays; }
  int size() const { return 3 * subarrays; }
};

Eigen::MatrixXd hermitian_real(const Eigen::MatrixXcd& m) { return 0.5 * (m.real() + m.real().transpose()); }

// Sum_i weight_i Re(c_i c_i^H) over the columns of `gain` except `skip`.
Eigen::MatrixXd rank_one_sum(const Eigen::MatrixXcd& gain, const Eigen::VectorXd& weights, int skip) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(gain.rows(), gain.rows());
  for (Eigen::Index i = 0; i < gain.cols(); ++i) {
    if (i == skip) continue;
    out += weights(i) * (gain.col(i) * gain.col(i).adjoint()).real();
  }
  return out;
}

void add_gamma(QuadraticForm& f, const SystemModel& model, const Layout& x, double weight) {
  const SecondMoments& m = model.moments;
  const PrecoderSet& p = model.precoders;
  for (int s = 0; s < x.subarrays; ++s) {
    if (model.nfue_count() > 0) f.add_square(x.bar() + s, weight * m.psi_near.row(s).dot(p.eta_near));
    if (model.ffue_count() > 0) f.add_square(x.tilde() + s, weight * m.psi_far.row(s).dot(p.eta_far));
    f.add_square(x.act() + s, weight * p.eta_sense(s) * m.sensing_norm2(s));
  }
}

void add_gamma_row(QuadraticForm& f, const SystemModel& model, const Layout& x, int s) {
  const SecondMoments& m = model.moments;
  const PrecoderSet& p = model.precoders;
  if (model.nfue_count() > 0) f.add_square(x.bar() + s, m.psi_near.row(s).dot(p.eta_near));
  if (model.ffue_count() > 0) f.add_square(x.tilde() + s, m.psi_far.row(s).dot(p.eta_far));
  f.add_square(x.act() + s, p.eta_sense(s) * m.sensing_norm2(s));
}

void check_convex(const QuadraticForm& f, ConstraintKind kind, int index) {
  const double scale = std::max({f.P.cwiseAbs().maxCoeff(), f.q.cwiseAbs().maxCoeff(), std::abs(f.r), 1e-300});
  if (f.min_curvature() < -1e-10 * scale) {
    throw AssemblyError(std::string("non-convex ") + to_string(kind) + " constraint", index);
  }
}

LinearRow unit_row(int n, std::initializer_list<std::pair<int, double>> entries, double lower, double upper) {
  LinearRow row;
  row.coeffs = Eigen::VectorXd::Zero(n);
  for (const auto& [i, c] : entries) row.coeffs(i) += c;
  row.lower = lower;
  row.upper = upper;
  return row;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

}  // namespace

const char* to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::nfue_sinr: return "nfue_sinr";
    case ConstraintKind::ffue_sinr: return "ffue_sinr";
    case ConstraintKind::beampattern: return "beampattern";
    case ConstraintKind::total_power: return "total_power";
    case ConstraintKind::subarray_power: return "subarray_power";
  }
  return "unknown";
}

double penalized_objective(const SystemModel& model, const ActivationState& state, const SurrogatePoint& point) {
  double value = total_power(model, state);
  const std::array<const Eigen::VectorXd*, 3> v{&state.a_bar, &state.a_tilde, &state.a};
  const std::array<const Eigen::VectorXd*, 3> at{&point.state.a_bar, &point.state.a_tilde, &point.state.a};
  for (int i = 0; i < 3; ++i) {
    for (Eigen::Index s = 0; s < v[i]->size(); ++s) {
      value += point.penalty[i] * surrogate::penalty_tangent((*v[i])(s), (*at[i])(s));
    }
  }
  return value;
}

ConvexSubproblem assemble_subproblem(const SystemModel& model, const QoSTargets& targets, const SurrogatePoint& point) {
  using namespace surrogate;
  const Layout x{model.subarray_count()};
  const int n = x.size();
  const SystemConfig& c = model.config;
  const SecondMoments& m = model.moments;
  const PrecoderSet& p = model.precoders;
  const ActivationState& at = point.state;

  ConvexSubproblem sp;
  sp.point = point;
  QcqpProblem& prog = sp.program;

  // Objective: exact power plus tangent penalties.
  prog.objective = QuadraticForm(n);
  add_gamma(prog.objective, model, x, 1.0 / c.amplifier_efficiency);
  for (int s = 0; s < x.subarrays; ++s) {
    prog.objective.add_linear(x.act() + s, c.elements_per_subarray * c.rf_chain_power_W);
  }
  prog.objective.add_constant(2.0 * c.synthesizer_power_W);
  const std::array<int, 3> offsets{x.bar(), x.tilde(), x.act()};
  const std::array<const Eigen::VectorXd*, 3> expansion{&at.a_bar, &at.a_tilde, &at.a};
  for (int i = 0; i < 3; ++i) {
    for (int s = 0; s < x.subarrays; ++s) {
      const double v = (*expansion[i])(s);
      prog.objective.add_linear(offsets[i] + s, point.penalty[i] * (1.0 - 2.0 * v));
      prog.objective.add_constant(point.penalty[i] * v * v);
    }
  }

  // Box rows, then coupling rows.
  for (int i = 0; i < n; ++i) prog.linear.push_back(unit_row(n, {{i, 1.0}}, 0.0, 1.0));
  const double inf = std::numeric_limits<double>::infinity();
  for (int s = 0; s < x.subarrays; ++s) {
    prog.linear.push_back(unit_row(n, {{x.act() + s, 1.0}, {x.bar() + s, -1.0}}, 0.0, inf));
    prog.linear.push_back(unit_row(n, {{x.act() + s, 1.0}, {x.tilde() + s, -1.0}}, 0.0, inf));
    prog.linear.push_back(unit_row(n, {{x.act() + s, 1.0}, {x.bar() + s, -1.0}, {x.tilde() + s, -1.0}}, -inf, 0.0));
  }

  auto push_block = [&](ConstraintKind kind, int user, std::vector<QuadraticForm> rows) {
    QuadraticBlock block{kind, user, static_cast<int>(prog.quadratic.size()), static_cast<int>(rows.size())};
    for (auto& row : rows) {
      check_convex(row, kind, static_cast<int>(prog.quadratic.size()));
      prog.quadratic.push_back(std::move(row));
    }
    sp.blocks.push_back(block);
  };

  // NFUE: R_k * (interference upper bound + noise) - eta_k * signal lower bound <= 0.
  for (int k = 0; k < model.nfue_count(); ++k) {
    QuadraticForm f(n);
    const double floor = targets.r_bar(k);
    if (floor > 0.0) {
      Eigen::MatrixXd far = Eigen::MatrixXd::Zero(x.subarrays, x.subarrays);
      for (int j = 0; j < model.ffue_count(); ++j) far += p.eta_far(j) * hermitian_real(m.rho[k][j]);
      add_form_upper(f, x.tilde(), floor * far, at.a_tilde);
      add_form_upper(f, x.bar(), floor * rank_one_sum(m.nfue_gain[k], p.eta_near, k), at.a_bar);
      for (int s = 0; s < x.subarrays; ++s) {
        f.add_square(x.act() + s, floor * p.eta_sense(s) * m.nfue_sense_leak[k](s));
      }
      f.add_constant(floor * c.noise_power_W);
      add_taylor_lb(f, x.bar(), m.nfue_gain[k].col(k), at.a_bar, -p.eta_near(k));
    }
    push_block(ConstraintKind::nfue_sinr, k, {std::move(f)});
  }

  // FFUE, same shape; the self-variance term is linear in a_tilde.
  for (int k = 0; k < model.ffue_count(); ++k) {
    QuadraticForm f(n);
    const double floor = targets.r_tilde(k);
    if (floor > 0.0) {
      for (int s = 0; s < x.subarrays; ++s) {
        f.add_linear(x.tilde() + s, floor * p.eta_far(k) * m.eps[k](s));
        if (model.nfue_count() > 0) f.add_square(x.bar() + s, floor * m.t[k].row(s).dot(p.eta_near));
        f.add_square(x.act() + s, floor * m.beta(k) * p.eta_sense(s) * m.sensing_norm2(s));
      }
      Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(x.subarrays, x.subarrays);
      for (int j = 0; j < model.ffue_count(); ++j) {
        if (j != k) cross += p.eta_far(j) * hermitian_real(m.varrho[k][j]);
      }
      add_form_upper(f, x.tilde(), floor * cross, at.a_tilde);
      f.add_constant(floor * c.noise_power_W);
      add_taylor_lb(f, x.tilde(), m.ffue_mean[k], at.a_tilde, -p.eta_far(k));
    }
    push_block(ConstraintKind::ffue_sinr, k, {std::move(f)});
  }

  // Beampattern: kappa - (concave lower bound on the gain) <= 0.
  {
    QuadraticForm f(n);
    if (targets.kappa > 0.0) {
      f.add_constant(targets.kappa);
      for (int k = 0; k < model.nfue_count(); ++k) {
        add_taylor_lb(f, x.bar(), m.beam_near[k], at.a_bar, -p.eta_near(k));
      }
      Eigen::MatrixXd far = Eigen::MatrixXd::Zero(x.subarrays, x.subarrays);
      for (int j = 0; j < model.ffue_count(); ++j) far += p.eta_far(j) * hermitian_real(m.beam_far[j]);
      // -(lower bound of a^T C a) is the upper bound of a^T (-C) a.
      add_form_upper(f, x.tilde(), -far, at.a_tilde);
      const Eigen::MatrixXd sense = (p.eta_sense.array() * m.beam_sense.array()).matrix().asDiagonal();
      add_form_upper(f, x.act(), -sense, at.a);
    }
    push_block(ConstraintKind::beampattern, -1, {std::move(f)});
  }

  {
    QuadraticForm f(n);
    add_gamma(f, model, x, 1.0);
    f.add_constant(-c.total_power_cap_W);
    push_block(ConstraintKind::total_power, -1, {std::move(f)});
  }
  {
    std::vector<QuadraticForm> rows;
    for (int s = 0; s < x.subarrays; ++s) {
      QuadraticForm f(n);
      add_gamma_row(f, model, x, s);
      f.add_constant(-c.subarray_cap_W());
      rows.push_back(std::move(f));
    }
    push_block(ConstraintKind::subarray_power, -1, std::move(rows));
  }

  check_convex(prog.objective, ConstraintKind::total_power, -1);
  return sp;
}

ActivationState project_relaxed(const ActivationState& state) {
  ActivationState out;
  out.a_bar = state.a_bar.cwiseMax(0.0).cwiseMin(1.0);
  out.a_tilde = state.a_tilde.cwiseMax(0.0).cwiseMin(1.0);
  const Eigen::VectorXd lo = out.a_bar.cwiseMax(out.a_tilde);
  const Eigen::VectorXd hi = (out.a_bar + out.a_tilde).cwiseMin(1.0);
  out.a = state.a.cwiseMax(lo).cwiseMin(hi);
  return out;
}

SubproblemSolution solve_subproblem(const ConvexSubproblem& subproblem, const QcqpOptions& options) {
  SubproblemSolution out;
  const QcqpResult r = solve_qcqp(subproblem.program, subproblem.point.state.stacked(), options);
  out.newton_steps = r.newton_steps;
  switch (r.status) {
    case QcqpStatus::optimal: out.status = SubproblemStatus::solved; break;
    case QcqpStatus::infeasible: out.status = SubproblemStatus::infeasible; break;
    case QcqpStatus::failed: out.status = SubproblemStatus::failed; break;
  }
  out.state = project_relaxed(ActivationState::from_stacked(r.x));
  out.objective = subproblem.program.objective.value(out.state.stacked());
  out.max_violation = max_violation(subproblem.program, out.state.stacked());
  return out;
}

ActivationState round_and_repair(const SystemModel& model, const QoSTargets& targets, const ActivationState& relaxed) {
  const int subarrays = relaxed.subarray_count();
  Eigen::VectorXd bar = (relaxed.a_bar.array() >= 0.5).cast<double>();
  Eigen::VectorXd tilde = (relaxed.a_tilde.array() >= 0.5).cast<double>();
  ActivationState state = ActivationState::from_binary(bar, tilde);

  while (!audit_constraints(model, targets, state).feasible) {
    // Candidates ordered by subarray, NFUE service before FFUE service.
    int best_s = -1;
    bool best_is_bar = true;
    double best_value = -1.0;
    for (int s = 0; s < subarrays; ++s) {
      if (bar(s) == 0.0 && relaxed.a_bar(s) > best_value) {
        best_s = s;
        best_is_bar = true;
        best_value = relaxed.a_bar(s);
      }
      if (tilde(s) == 0.0 && relaxed.a_tilde(s) > best_value) {
        best_s = s;
        best_is_bar = false;
        best_value = relaxed.a_tilde(s);
      }
    }
    if (best_s < 0) break;  // all on; feasible whenever the instance is
    (best_is_bar ? bar : tilde)(best_s) = 1.0;
    state = ActivationState::from_binary(bar, tilde);
  }
  return state;
}

SolveResult run_sca(const SystemModel& model, const QoSTargets& targets, const QcqpOptions& options) {
  const SystemConfig& c = model.config;
  const int subarrays = model.subarray_count();
  const ActivationState all_on = ActivationState::all_on(subarrays);
  if (!audit_constraints(model, targets, all_on).feasible) {
    throw InfeasibleInstanceError("all-on activation violates the QoS or power constraints");
  }

  SolveResult result;
  SurrogatePoint point{all_on, {c.penalty_init, c.penalty_init, c.penalty_init}};
  double previous = penalized_objective(model, all_on, point);

  for (int n = 1; n <= c.max_iterations; ++n) {
    const ConvexSubproblem sp = assemble_subproblem(model, targets, point);
    const SubproblemSolution sol = solve_subproblem(sp, options);
    result.iterations = n;
    if (sol.status != SubproblemStatus::solved) {
      result.degraded = true;
      break;
    }

    IterationRecord rec;
    rec.iteration = n;
    // Penalty evaluated exactly at the iterate, so a binary iterate scores its true power.
    rec.penalized_objective = penalized_objective(model, sol.state, SurrogatePoint{sol.state, point.penalty});
    rec.power_W = total_power(model, sol.state);
    rec.binarity_gap = sol.state.binarity_gap();
    rec.penalty = point.penalty[0];
    rec.newton_steps = sol.newton_steps;
    rec.variables = sp.variable_count();
    rec.linear_rows = sp.linear_count();
    rec.quadratic_constraints = sp.quadratic_count();
    result.trace.push_back(rec);

    const double change = std::abs(rec.penalized_objective - previous) / std::abs(previous);
    previous = rec.penalized_objective;
    point.state = sol.state;
    for (double& lambda : point.penalty) lambda = std::min(lambda * c.penalty_growth, c.penalty_cap);
    if (change < c.tol_eps1) {
      result.converged = true;
      break;
    }
  }

  result.relaxed_final = point.state;
  result.activation = round_and_repair(model, targets, point.state);
  result.audit = audit_constraints(model, targets, result.activation);
  result.power_W = result.audit.power.total_W;
  result.feasible = result.audit.feasible;
  return result;
}

nlohmann::json solve_result_to_json(const SolveResult& r) {
  nlohmann::json j;
  j["activation"] = activation_to_json(r.activation);
  j["relaxed_final"] = activation_to_json(r.relaxed_final);
  j["power_W"] = r.power_W;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["degraded"] = r.degraded;
  j["feasible"] = r.feasible;
  j["active_subarrays"] = r.activation.active_count();
  j["audit"] = audit_to_json(r.audit);
  auto trace = nlohmann::json::array();
  for (const auto& t : r.trace) {
    trace.push_back({{"iteration", t.iteration},
                     {"penalized_objective_W", t.penalized_objective},
                     {"power_W", t.power_W},
                     {"binarity_gap", t.binarity_gap},
                     {"penalty", t.penalty}});
  }
  j["trace"] = trace;
  return j;
}

std::string trace_to_csv(const SolveResult& r) {
  std::ostringstream out;
  out << "iteration,penalized_objective_W,power_W,binarity_gap,penalty\n";
  for (const auto& t : r.trace) {
    out << t.iteration << ',' << format_double(t.penalized_objective) << ',' << format_double(t.power_W) << ','
        << format_double(t.binarity_gap) << ',' << format_double(t.penalty) << '\n';
  }
  return out.str();
}

}  // namespace elaa
