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

#include "elaa/surrogate.hpp"

#include <complex>

namespace elaa::surrogate {

namespace {
std::complex<double> transpose_dot(const Eigen::VectorXcd& c, const Eigen::VectorXd& x) {
  return (c.array() * x.array().cast<std::complex<double>>()).sum();
}
}  // namespace

double taylor_lb_quadratic(const Eigen::VectorXcd& c, const Eigen::VectorXd& x, const Eigen::VectorXd& x_n) {
  const std::complex<double> at = transpose_dot(c, x_n);
  const std::complex<double> delta = transpose_dot(c, x - x_n);
  return std::norm(at) + 2.0 * std::real(std::conj(at) * delta);
}

double bilinear_upper(double x, double y, double x_n, double y_n) {
  const double d = x_n - y_n;
  return 0.25 * ((x + y) * (x + y) - 2.0 * d * (x - y) + d * d);
}

double bilinear_lower(double x, double y, double x_n, double y_n) {
  const double p = x_n + y_n;
  return 0.25 * (2.0 * p * (x + y) - p * p - (x - y) * (x - y));
}

double penalty_tangent(double v, double v_n) { return (1.0 - 2.0 * v_n) * v + v_n * v_n; }

double square_tangent(double v, double v_n) { return 2.0 * v_n * v - v_n * v_n; }

void add_taylor_lb(QuadraticForm& f, int offset, const Eigen::VectorXcd& c, const Eigen::VectorXd& x_n,
                   double weight) {
  // |c^T x_n|^2 + 2 Re{conj(c^T x_n) c^T (x - x_n)} = 2 Re{conj(c^T x_n) c}^T x - |c^T x_n|^2.
  const std::complex<double> at = transpose_dot(c, x_n);
  for (Eigen::Index s = 0; s < c.size(); ++s) {
    f.add_linear(offset + static_cast<int>(s), weight * 2.0 * std::real(std::conj(at) * c(s)));
  }
  f.add_constant(-weight * std::norm(at));
}

void add_bilinear_upper(QuadraticForm& f, int i, int j, double x_n, double y_n, double weight) {
  const double d = x_n - y_n;
  f.add_square(i, 0.25 * weight);
  f.add_square(j, 0.25 * weight);
  f.add_product(i, j, 0.5 * weight);
  f.add_linear(i, -0.5 * d * weight);
  f.add_linear(j, 0.5 * d * weight);
  f.add_constant(0.25 * d * d * weight);
}

void add_bilinear_lower(QuadraticForm& f, int i, int j, double x_n, double y_n, double weight) {
  const double p = x_n + y_n;
  f.add_square(i, -0.25 * weight);
  f.add_square(j, -0.25 * weight);
  f.add_product(i, j, 0.5 * weight);
  f.add_linear(i, 0.5 * p * weight);
  f.add_linear(j, 0.5 * p * weight);
  f.add_constant(-0.25 * p * p * weight);
}

namespace {

void add_square_bound(QuadraticForm& f, int i, double coeff, double x_n, bool upper) {
  // A convex square is its own upper bound; its tangent is a lower bound. Negative
  // coefficients flip the roles.
  const bool keep_exact = (coeff >= 0.0) == upper;
  if (keep_exact) {
    f.add_square(i, coeff);
  } else {
    f.add_linear(i, coeff * 2.0 * x_n);
    f.add_constant(-coeff * x_n * x_n);
  }
}

void add_pair_bound(QuadraticForm& f, int i, int j, double coeff, double x_n, double y_n, bool upper) {
  if (coeff == 0.0) return;
  if ((coeff > 0.0) == upper) {
    add_bilinear_upper(f, i, j, x_n, y_n, coeff);
  } else {
    add_bilinear_lower(f, i, j, x_n, y_n, coeff);
  }
}

void add_form(QuadraticForm& f, int offset, const Eigen::MatrixXd& c, const Eigen::VectorXd& x_n, bool upper) {
  const int n = static_cast<int>(c.rows());
  for (int s = 0; s < n; ++s) {
    add_square_bound(f, offset + s, c(s, s), x_n(s), upper);
    for (int t = s + 1; t < n; ++t) {
      add_pair_bound(f, offset + s, offset + t, c(s, t) + c(t, s), x_n(s), x_n(t), upper);
    }
  }
}

}  // namespace

void add_form_upper(QuadraticForm& f, int offset, const Eigen::MatrixXd& c, const Eigen::VectorXd& x_n) {
  add_form(f, offset, c, x_n, true);
}

void add_form_lower(QuadraticForm& f, int offset, const Eigen::MatrixXd& c, const Eigen::VectorXd& x_n) {
  add_form(f, offset, c, x_n, false);
}

}  // namespace elaa::surrogate
