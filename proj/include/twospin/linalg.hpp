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

#ifndef TWOSPIN_LINALG_HPP_
#define TWOSPIN_LINALG_HPP_

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace twospin {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix<cplx, 2, 2>;
using Mat4 = Eigen::Matrix<cplx, 4, 4>;
using Mat16 = Eigen::Matrix<cplx, 16, 16>;
using Vec4 = Eigen::Matrix<cplx, 4, 1>;
using Vec16 = Eigen::Matrix<cplx, 16, 1>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Largest absolute entry; the norm used for all elementwise tolerances.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const auto v = cplx(m(i, j));
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
  return true;
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
///
/// The argument is scaled by 2^-s until its 1-norm is at most 1/2, the series
/// is summed until the next term is below machine epsilon relative to the
/// partial sum, and the result is squared s times.
template <typename Derived>
auto matrix_exp(const Eigen::MatrixBase<Derived>& m) {
  using Plain = typename Derived::PlainObject;
  if (m.rows() != m.cols())
    throw std::invalid_argument("matrix_exp: matrix is not square");
  if (!all_finite(m))
    throw std::invalid_argument("matrix_exp: non-finite entry");

  const Eigen::Index n = m.rows();
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  const double scale = std::ldexp(1.0, -squarings);
  const Plain a = m * scale;

  Plain result = Plain::Identity(n, n);
  Plain term = Plain::Identity(n, n);
  constexpr double eps = 1e-17;
  for (int k = 1; k <= 40; ++k) {
    term = (term * a) / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() <= eps * result.cwiseAbs().maxCoeff()) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

namespace detail {

template <typename Derived>
auto clamped_eigen(const Eigen::MatrixBase<Derived>& h) {
  Eigen::SelfAdjointEigenSolver<typename Derived::PlainObject> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  return solver;
}

}  // namespace detail

/// Principal square root of a Hermitian PSD matrix; eigenvalues below zero
/// (numerical noise) are clamped to zero.
template <typename Derived>
auto hermitian_sqrt(const Eigen::MatrixBase<Derived>& h) {
  const auto solver = detail::clamped_eigen(h.eval());
  auto vals = solver.eigenvalues().eval();
  for (Eigen::Index i = 0; i < vals.size(); ++i) vals(i) = std::sqrt(std::max(vals(i), 0.0));
  using Plain = typename Derived::PlainObject;
  Plain out = solver.eigenvectors() * vals.template cast<cplx>().asDiagonal() *
              solver.eigenvectors().adjoint();
  return out;
}

template <typename Derived>
double min_eigenvalue(const Eigen::MatrixBase<Derived>& h) {
  const typename Derived::PlainObject herm = (h + h.adjoint()) * 0.5;
  return detail::clamped_eigen(herm).eigenvalues().minCoeff();
}

/// Kronecker product of two fixed-size matrices.
template <typename A, typename B>
auto kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  constexpr int R = static_cast<int>(A::RowsAtCompileTime) * static_cast<int>(B::RowsAtCompileTime);
  constexpr int C = static_cast<int>(A::ColsAtCompileTime) * static_cast<int>(B::ColsAtCompileTime);
  Eigen::Matrix<cplx, R, C> out;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = cplx(a(i, j)) * b;
  return out;
}

}  // namespace twospin

#endif  // TWOSPIN_LINALG_HPP_
