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

#include <Eigen/Dense>

#include "elaa/qcqp.hpp"

// Convex bounds used to build the successive subproblems. Every bound is tight at its
// expansion point (x_n, y_n).
namespace elaa::surrogate {

// First-order expansion of |c^T x|^2 at x_n. Never exceeds |c^T x|^2; the gap is |c^T (x - x_n)|^2.
double taylor_lb_quadratic(const Eigen::VectorXcd& c, const Eigen::VectorXd& x, const Eigen::VectorXd& x_n);

// Convex upper bound on x*y: ((x+y)^2 - 2(x_n-y_n)(x-y) + (x_n-y_n)^2) / 4.
double bilinear_upper(double x, double y, double x_n, double y_n);

// Concave lower bound on x*y: (2(x_n+y_n)(x+y) - (x_n+y_n)^2 - (x-y)^2) / 4.
double bilinear_lower(double x, double y, double x_n, double y_n);

// Tangent of v(1 - v) at v_n: (1 - 2 v_n) v + v_n^2. Majorises the concave penalty.
double penalty_tangent(double v, double v_n);

// Tangent of v^2 at v_n; minorises the square.
double square_tangent(double v, double v_n);

// --- Builders writing the bounds into a QuadraticForm over a stacked variable vector. ---
// `offset` is where the S-block of the relevant activation vector starts.

// weight * taylor_lb_quadratic(c, x, x_n); the result is affine in x.
void add_taylor_lb(QuadraticForm& f, int offset, const Eigen::VectorXcd& c, const Eigen::VectorXd& x_n,
                   double weight);

void add_bilinear_upper(QuadraticForm& f, int i, int j, double x_n, double y_n, double weight);
void add_bilinear_lower(QuadraticForm& f, int i, int j, double x_n, double y_n, double weight);

// Convex upper bound on x^T C x for symmetric C: diagonal squares kept exactly (or tangent if
// negative), every off-diagonal pair bounded by its sign-matched bilinear bound.
void add_form_upper(QuadraticForm& f, int offset, const Eigen::MatrixXd& c, const Eigen::VectorXd& x_n);

// Concave lower bound on x^T C x, the mirror image of add_form_upper.
void add_form_lower(QuadraticForm& f, int offset, const Eigen::MatrixXd& c, const Eigen::VectorXd& x_n);

}  // namespace elaa::surrogate
