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

#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace elaa {

// f(x) = x^T P x + q^T x + r with P symmetric.
struct QuadraticForm {
  Eigen::MatrixXd P;
  Eigen::VectorXd q;
  double r = 0.0;

  QuadraticForm() = default;
  explicit QuadraticForm(int dimension);

  int dimension() const noexcept { return static_cast<int>(q.size()); }
  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  bool is_linear() const;

  void add_square(int i, double c);          // c x_i^2
  void add_product(int i, int j, double c);  // c x_i x_j, i != j
  void add_linear(int i, double c);          // c x_i
  void add_constant(double c) { r += c; }
  // Smallest eigenvalue of P.
  double min_curvature() const;
};

// lower <= coeffs^T x <= upper; either side may be infinite.
struct LinearRow {
  Eigen::VectorXd coeffs;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

// minimize objective(x) s.t. linear rows, quadratic(x) <= 0 for every quadratic row.
// Every quadratic form (objective included) must be convex.
struct QcqpProblem {
  QuadraticForm objective;
  std::vector<LinearRow> linear;
  std::vector<QuadraticForm> quadratic;

  int dimension() const noexcept { return objective.dimension(); }
};

enum class QcqpStatus { optimal, infeasible, failed };

const char* to_string(QcqpStatus status);

struct QcqpOptions {
  // Rows are normalised to unit coefficient scale and then relaxed by this amount, so a
  // feasible set with empty interior still admits a strictly feasible start.
  double feasibility_relaxation = 1e-9;
  // Stop once (barrier rows) / t drops below this, measured on the normalised objective.
  double gap_tolerance = 1e-10;
  double barrier_growth = 20.0;
  double newton_tolerance = 1e-11;
  int max_newton_steps = 100;
  int max_outer_steps = 60;
};

struct QcqpResult {
  QcqpStatus status = QcqpStatus::failed;
  Eigen::VectorXd x;
  double objective = 0.0;
  // Largest violation over the normalised, unrelaxed rows.
  double max_violation = 0.0;
  int newton_steps = 0;
  bool used_phase_one = false;
};

// Log-barrier interior-point method with a phase-one feasibility search from `start`.
// Deterministic for identical input.
QcqpResult solve_qcqp(const QcqpProblem& problem, const Eigen::VectorXd& start, const QcqpOptions& options = {});

// Largest normalised violation of `x` against the rows of `problem` (0 if feasible).
double max_violation(const QcqpProblem& problem, const Eigen::VectorXd& x);

}  // namespace elaa
