// Copyright 2026 The twospin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TWOSPIN_LEAST_SQUARES_HPP_
#define TWOSPIN_LEAST_SQUARES_HPP_

#include <algorithm>
#include <cmath>
#include <concepts>

#include <Eigen/Dense>

namespace twospin {

struct LeastSquaresOptions {
  int max_iterations = 200;
  double gradient_tol = 1e-10;  // max |J^T r|
  double step_tol = 1e-12;      // ||dx|| relative to 1 + ||x||
  double initial_damping = 1e-3;
};

enum class StopReason { gradient, step, no_decrease, max_iterations };

struct LeastSquaresResult {
  Eigen::VectorXd x;
  Eigen::VectorXd residuals;
  Eigen::MatrixXd jacobian;
  double cost = 0.0;           // 0.5 ||r||^2
  double gradient_norm = 0.0;  // max |J^T r| at x
  int iterations = 0;
  StopReason reason = StopReason::max_iterations;

  bool converged() const { return reason != StopReason::max_iterations; }
};

/// Fills residuals `r` (size m) and Jacobian `J` (m x n) at `x`.
template <typename F>
concept ResidualFunction =
    requires(F f, const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd& j) {
      f(x, r, j);
    };

/// Levenberg-Marquardt with Marquardt diagonal scaling.
///
/// `no_decrease` means the damping saturated without lowering the cost, i.e. x
/// is a minimum to working precision.
template <ResidualFunction F>
LeastSquaresResult levenberg_marquardt(F&& residual, Eigen::VectorXd x,
                                       const LeastSquaresOptions& opts = {}) {
  LeastSquaresResult out;
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  residual(x, r, jac);
  double cost = 0.5 * r.squaredNorm();
  double lambda = opts.initial_damping;

  Eigen::VectorXd r_try;
  Eigen::MatrixXd jac_try;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const Eigen::VectorXd grad = jac.transpose() * r;
    if (grad.cwiseAbs().maxCoeff() < opts.gradient_tol) {
      out.reason = StopReason::gradient;
      break;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd scale = jtj.diagonal().cwiseMax(1e-12);

    bool accepted = false;
    bool tiny_step = false;
    while (lambda < 1e16) {
      Eigen::MatrixXd lhs = jtj;
      lhs.diagonal() += lambda * scale;
      const Eigen::VectorXd step = lhs.ldlt().solve(-grad);
      const Eigen::VectorXd x_try = x + step;
      residual(x_try, r_try, jac_try);
      const double cost_try = 0.5 * r_try.squaredNorm();
      tiny_step = step.norm() < opts.step_tol * (1.0 + x.norm());
      if (std::isfinite(cost_try) && cost_try <= cost) {
        x = x_try;
        r.swap(r_try);
        jac.swap(jac_try);
        cost = cost_try;
        lambda = std::max(lambda / 3.0, 1e-15);
        accepted = true;
        break;
      }
      if (tiny_step) break;
      lambda *= 4.0;
    }
    if (tiny_step) {
      out.reason = accepted ? StopReason::step : StopReason::no_decrease;
      ++it;
      break;
    }
    if (!accepted) {
      out.reason = StopReason::no_decrease;
      ++it;
      break;
    }
  }
  out.iterations = it;
  out.x = x;
  out.residuals = r;
  out.jacobian = jac;
  out.cost = cost;
  out.gradient_norm = (jac.transpose() * r).cwiseAbs().maxCoeff();
  if (out.reason == StopReason::max_iterations && out.gradient_norm < opts.gradient_tol)
    out.reason = StopReason::gradient;
  return out;
}

/// Parameter covariance (J^T J)^{-1} scaled by `variance`.
inline Eigen::MatrixXd covariance(const Eigen::MatrixXd& jac, double variance) {
  const Eigen::MatrixXd jtj = jac.transpose() * jac;
  return jtj.completeOrthogonalDecomposition().pseudoInverse() * variance;
}

}  // namespace twospin

#endif  // TWOSPIN_LEAST_SQUARES_HPP_
