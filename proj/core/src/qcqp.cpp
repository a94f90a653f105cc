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

#include "elaa/qcqp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Eigenvalues>

namespace elaa {

QuadraticForm::QuadraticForm(int dimension)
    : P(Eigen::MatrixXd::Zero(dimension, dimension)), q(Eigen::VectorXd::Zero(dimension)) {}

double QuadraticForm::value(const Eigen::VectorXd& x) const {
  return x.dot(P * x) + q.dot(x) + r;
}

Eigen::VectorXd QuadraticForm::gradient(const Eigen::VectorXd& x) const {
  return 2.0 * (P * x) + q;
}

bool QuadraticForm::is_linear() const { return P.isZero(0.0); }

void QuadraticForm::add_square(int i, double c) { P(i, i) += c; }

void QuadraticForm::add_product(int i, int j, double c) {
  P(i, j) += 0.5 * c;
  P(j, i) += 0.5 * c;
}

void QuadraticForm::add_linear(int i, double c) { q(i) += c; }

double QuadraticForm::min_curvature() const {
  if (P.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(P, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

const char* to_string(QcqpStatus status) {
  switch (status) {
    case QcqpStatus::optimal: return "optimal";
    case QcqpStatus::infeasible: return "infeasible";
    case QcqpStatus::failed: return "failed";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Normalised inequality system: A x - b <= 0 and quad_i(x) <= 0.
struct Barrier {
  QuadraticForm objective;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  std::vector<QuadraticForm> quad;

  int dimension() const { return objective.dimension(); }
  int rows() const { return static_cast<int>(A.rows() + quad.size()); }
};

double coefficient_scale(const QuadraticForm& f) {
  double scale = std::abs(f.r);
  if (f.P.size() > 0) scale = std::max(scale, f.P.cwiseAbs().maxCoeff());
  if (f.q.size() > 0) scale = std::max(scale, f.q.cwiseAbs().maxCoeff());
  return scale;
}

struct Normalised {
  Barrier barrier;
  bool trivially_infeasible = false;
};

Normalised normalise(const QcqpProblem& problem, double relax) {
  Normalised out;
  Barrier& b = out.barrier;
  const int n = problem.dimension();

  b.objective = problem.objective;
  const double obj_scale = coefficient_scale(problem.objective);
  if (obj_scale > 0.0) {
    b.objective.P /= obj_scale;
    b.objective.q /= obj_scale;
    b.objective.r /= obj_scale;
  }

  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (const LinearRow& row : problem.linear) {
    const double scale = row.coeffs.size() > 0 ? row.coeffs.cwiseAbs().maxCoeff() : 0.0;
    if (scale == 0.0) {
      if (row.lower > 0.0 || row.upper < 0.0) out.trivially_infeasible = true;
      continue;
    }
    if (std::isfinite(row.upper)) {
      rows.push_back(row.coeffs / scale);
      rhs.push_back(row.upper / scale + relax);
    }
    if (std::isfinite(row.lower)) {
      rows.push_back(-row.coeffs / scale);
      rhs.push_back(-row.lower / scale + relax);
    }
  }
  b.A.resize(static_cast<Eigen::Index>(rows.size()), n);
  b.b.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    b.A.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    b.b(static_cast<Eigen::Index>(i)) = rhs[i];
  }

  for (const QuadraticForm& f : problem.quadratic) {
    const double scale = coefficient_scale(f);
    if (scale == 0.0) continue;
    QuadraticForm g = f;
    g.P /= scale;
    g.q /= scale;
    g.r = f.r / scale - relax;
    b.quad.push_back(std::move(g));
  }
  return out;
}

// Row values; returns the largest one.
double row_values(const Barrier& b, const Eigen::VectorXd& x, Eigen::VectorXd& lin, Eigen::VectorXd& quad) {
  double worst = -kInf;
  lin = b.A * x - b.b;
  if (lin.size() > 0) worst = lin.maxCoeff();
  quad.resize(static_cast<Eigen::Index>(b.quad.size()));
  for (std::size_t i = 0; i < b.quad.size(); ++i) {
    quad(static_cast<Eigen::Index>(i)) = b.quad[i].value(x);
    worst = std::max(worst, quad(static_cast<Eigen::Index>(i)));
  }
  return worst;
}

double barrier_value(const Barrier& b, const Eigen::VectorXd& x, double t) {
  Eigen::VectorXd lin, quad;
  if (!(row_values(b, x, lin, quad) < 0.0)) return kInf;
  double v = t * b.objective.value(x);
  v -= (-lin.array()).log().sum();
  v -= (-quad.array()).log().sum();
  return std::isfinite(v) ? v : kInf;
}

enum class CenterOutcome { centred, stalled, failed };

CenterOutcome centre(const Barrier& b, Eigen::VectorXd& x, double t, const QcqpOptions& options, int& steps) {
  const int n = b.dimension();
  Eigen::VectorXd lin, quad;
  for (int iter = 0; iter < options.max_newton_steps; ++iter) {
    if (!(row_values(b, x, lin, quad) < 0.0)) return CenterOutcome::failed;

    Eigen::VectorXd grad = t * b.objective.gradient(x);
    Eigen::MatrixXd hess = 2.0 * t * b.objective.P;
    if (lin.size() > 0) {
      const Eigen::VectorXd inv = (-lin).cwiseInverse();
      grad.noalias() += b.A.transpose() * inv;
      hess.noalias() += b.A.transpose() * inv.array().square().matrix().asDiagonal() * b.A;
    }
    for (std::size_t i = 0; i < b.quad.size(); ++i) {
      const double f = quad(static_cast<Eigen::Index>(i));
      const Eigen::VectorXd g = b.quad[i].gradient(x);
      grad += g / (-f);
      hess.noalias() += (g * g.transpose()) / (f * f);
      hess += (2.0 / (-f)) * b.quad[i].P;
    }

    Eigen::VectorXd step;
    double ridge = 0.0;
    const double diag_scale = std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::MatrixXd h = hess;
      if (ridge > 0.0) h.diagonal().array() += ridge;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
      if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        step = ldlt.solve(-grad);
        if (step.allFinite()) break;
      }
      step.resize(0);
      ridge = ridge == 0.0 ? 1e-14 * diag_scale : ridge * 100.0;
    }
    if (step.size() != n) return CenterOutcome::failed;

    const double decrement = -grad.dot(step);
    ++steps;
    if (decrement < 0.0 || decrement / 2.0 <= options.newton_tolerance) return CenterOutcome::centred;

    // Backtrack into the strict interior, then to sufficient decrease.
    const double current = barrier_value(b, x, t);
    double alpha = 1.0;
    while (alpha > 1e-20 && barrier_value(b, x + alpha * step, t) == kInf) alpha *= 0.5;
    while (alpha > 1e-20 && barrier_value(b, x + alpha * step, t) > current - 0.25 * alpha * decrement) {
      alpha *= 0.5;
    }
    if (alpha <= 1e-20) return CenterOutcome::stalled;
    x += alpha * step;
  }
  return CenterOutcome::stalled;
}

enum class BarrierOutcome { converged, stopped_early, failed };

// Path-following outer loop. `stop` is checked after every centring step.
BarrierOutcome follow_path(const Barrier& b, Eigen::VectorXd& x, const QcqpOptions& options, int& steps,
                           const std::function<bool(const Eigen::VectorXd&)>& stop) {
  const double rows = std::max(1, b.rows());
  double t = 1.0;
  for (int outer = 0; outer < options.max_outer_steps; ++outer) {
    const CenterOutcome c = centre(b, x, t, options, steps);
    if (c == CenterOutcome::failed) return BarrierOutcome::failed;
    if (stop && stop(x)) return BarrierOutcome::stopped_early;
    const double scale = std::max(1.0, std::abs(b.objective.value(x)));
    if (rows / t < options.gap_tolerance * scale) return BarrierOutcome::converged;
    // A stalled centring this deep is as good as it gets in double precision.
    if (c == CenterOutcome::stalled && rows / t < 1e-6 * scale) return BarrierOutcome::converged;
    t *= options.barrier_growth;
  }
  return BarrierOutcome::converged;
}

// Phase one: minimise s subject to row_i(x) <= s, s >= -1.
Barrier phase_one(const Barrier& b) {
  const int n = b.dimension();
  Barrier p;
  p.objective = QuadraticForm(n + 1);
  p.objective.q(n) = 1.0;
  const Eigen::Index m = b.A.rows();
  p.A = Eigen::MatrixXd::Zero(m + 1, n + 1);
  p.b.resize(m + 1);
  if (m > 0) {
    p.A.topLeftCorner(m, n) = b.A;
    p.A.col(n).head(m).setConstant(-1.0);
    p.b.head(m) = b.b;
  }
  p.A(m, n) = -1.0;
  p.b(m) = 1.0;
  for (const QuadraticForm& f : b.quad) {
    QuadraticForm g(n + 1);
    g.P.topLeftCorner(n, n) = f.P;
    g.q.head(n) = f.q;
    g.q(n) = -1.0;
    g.r = f.r;
    p.quad.push_back(std::move(g));
  }
  return p;
}

}  // namespace

double max_violation(const QcqpProblem& problem, const Eigen::VectorXd& x) {
  const Normalised norm = normalise(problem, 0.0);
  Eigen::VectorXd lin, quad;
  const double worst = row_values(norm.barrier, x, lin, quad);
  return std::max(0.0, worst);
}

QcqpResult solve_qcqp(const QcqpProblem& problem, const Eigen::VectorXd& start, const QcqpOptions& options) {
  QcqpResult result;
  const int n = problem.dimension();
  if (start.size() != n) {
    result.status = QcqpStatus::failed;
    return result;
  }
  const Normalised norm = normalise(problem, options.feasibility_relaxation);
  if (norm.trivially_infeasible) {
    result.status = QcqpStatus::infeasible;
    result.x = start;
    return result;
  }
  const Barrier& b = norm.barrier;

  Eigen::VectorXd x = start;
  Eigen::VectorXd lin, quad;
  const double worst = row_values(b, x, lin, quad);
  if (!(worst < -1e-6)) {
    result.used_phase_one = true;
    const Barrier p = phase_one(b);
    Eigen::VectorXd y(n + 1);
    y.head(n) = x;
    y(n) = std::max(worst, 0.0) + 1.0;
    const auto outcome =
        follow_path(p, y, options, result.newton_steps, [n](const Eigen::VectorXd& v) { return v(n) < 0.0; });
    if (outcome == BarrierOutcome::failed) {
      result.status = QcqpStatus::failed;
      result.x = start;
      return result;
    }
    if (!(y(n) < 0.0)) {
      result.status = QcqpStatus::infeasible;
      result.x = y.head(n);
      return result;
    }
    x = y.head(n);
  }

  const auto outcome = follow_path(b, x, options, result.newton_steps, nullptr);
  result.x = x;
  result.objective = problem.objective.value(x);
  result.max_violation = max_violation(problem, x);
  result.status = outcome == BarrierOutcome::failed ? QcqpStatus::failed : QcqpStatus::optimal;
  return result;
}

}  // namespace elaa
