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

#ifndef TWOSPIN_SPINOPS_HPP_
#define TWOSPIN_SPINOPS_HPP_

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "twospin/linalg.hpp"

namespace twospin {

// Two-spin Hilbert space ordered spin 1 (x) spin 2, basis |00>, |01>, |10>, |11>.

enum class Spin { one = 1, two = 2 };
enum class Axis { x, y, z };
enum class PulsePhase { x, minus_x, y, minus_y };
enum class PulseTarget { spin1, spin2, both };

using Operator = Mat4;

inline Mat2 pauli_1spin(Axis axis) {
  Mat2 m;
  switch (axis) {
    case Axis::x: m << 0, 1, 1, 0; break;
    case Axis::y: m << 0, -kI, kI, 0; break;
    case Axis::z: m << 1, 0, 0, -1; break;
  }
  return m;
}

/// Embeds a single-spin operator on the given spin.
inline Operator embed(const Mat2& op, Spin spin) {
  const Mat2 id = Mat2::Identity();
  return spin == Spin::one ? Operator(kron(op, id)) : Operator(kron(id, op));
}

inline Operator pauli(Spin spin, Axis axis) { return embed(pauli_1spin(axis), spin); }

/// I_axis = sigma_axis / 2 on one spin.
inline Operator angular_momentum(Spin spin, Axis axis) { return 0.5 * pauli(spin, axis); }

/// A 4x4 matrix known to be unitary to within 1e-12 (max-abs entry norm).
class Unitary {
 public:
  static constexpr double kTolerance = 1e-12;

  static Unitary identity() { return Unitary(Mat4::Identity()); }

  /// Throws std::invalid_argument if `m` is not unitary.
  static Unitary from_matrix(const Mat4& m) {
    if (!is_unitary(m)) throw std::invalid_argument("matrix is not unitary to 1e-12");
    return Unitary(m);
  }

  static bool is_unitary(const Mat4& m) {
    return all_finite(m) && max_abs(m * m.adjoint() - Mat4::Identity()) <= kTolerance;
  }

  const Mat4& matrix() const { return m_; }

  /// U rho U^dagger.
  Mat4 conjugate(const Mat4& rho) const { return m_ * rho * m_.adjoint(); }

  Vec4 apply(const Vec4& psi) const { return m_ * psi; }

  /// Operator product; `a * b` applies b first.
  friend Unitary operator*(const Unitary& a, const Unitary& b) { return Unitary(a.m_ * b.m_); }

 private:
  explicit Unitary(const Mat4& m) : m_(m) {}
  Mat4 m_;
};

struct SpinSystem {
  std::string name;
  double nu1 = 0.0;  // Hz
  double nu2 = 0.0;  // Hz
  double j12 = 0.0;  // Hz

  /// |nu1 - nu2| >= ratio * |J|. Violations are worth a warning, not a rejection.
  bool weakly_coupled(double ratio = 10.0) const {
    return std::abs(nu1 - nu2) >= ratio * std::abs(j12);
  }
};

/// Built-in molecules: "btc", "cytosine", "coumarin".
inline std::optional<SpinSystem> spin_system_preset(std::string_view name) {
  static const std::array<SpinSystem, 3> presets{{
      {"btc", 4602.4, 4287.0, 4.2},
      {"cytosine", 4407.7, 3490.8, 7.1},
      {"coumarin", 4734.0, 3807.9, 9.5},
  }};
  for (const auto& p : presets)
    if (p.name == name) return p;
  return std::nullopt;
}

/// Weak-coupling Hamiltonian in the frame rotating at nu_rf, in rad/s.
inline Operator hamiltonian(const SpinSystem& system, double nu_rf) {
  if (!std::isfinite(system.nu1) || !std::isfinite(system.nu2) || !std::isfinite(system.j12) ||
      !std::isfinite(nu_rf))
    throw std::invalid_argument("hamiltonian: non-finite frequency");
  const double w1 = 2.0 * kPi * (system.nu1 - nu_rf);
  const double w2 = 2.0 * kPi * (system.nu2 - nu_rf);
  const Operator i1z = angular_momentum(Spin::one, Axis::z);
  const Operator i2z = angular_momentum(Spin::two, Axis::z);
  return -w1 * i1z - w2 * i2z + (2.0 * kPi * system.j12) * (i1z * i2z);
}

namespace detail {

inline Mat2 rotation_1spin(double angle, PulsePhase phase) {
  // exp(-i angle sigma/2) = cos(angle/2) I - i sin(angle/2) sigma
  Axis axis = Axis::x;
  double sign = 1.0;
  switch (phase) {
    case PulsePhase::x: break;
    case PulsePhase::minus_x: sign = -1.0; break;
    case PulsePhase::y: axis = Axis::y; break;
    case PulsePhase::minus_y: axis = Axis::y; sign = -1.0; break;
  }
  const double half = 0.5 * sign * angle;
  return std::cos(half) * Mat2::Identity() - kI * std::sin(half) * pauli_1spin(axis);
}

}  // namespace detail

/// Ideal instantaneous rotation exp(-i angle I_phase) on the target spin(s).
inline Unitary pulse(double angle, PulsePhase phase, PulseTarget target) {
  if (!std::isfinite(angle)) throw std::invalid_argument("pulse: non-finite angle");
  const Mat2 r = detail::rotation_1spin(angle, phase);
  const Mat2 id = Mat2::Identity();
  switch (target) {
    case PulseTarget::spin1: return Unitary::from_matrix(kron(r, id));
    case PulseTarget::spin2: return Unitary::from_matrix(kron(id, r));
    case PulseTarget::both: break;
  }
  return Unitary::from_matrix(kron(r, r));
}

/// exp(-i H tau) for Hermitian H in rad/s.
inline Unitary free_evolution(const Operator& h, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("free_evolution: tau must be >= 0");
  if (!is_hermitian(h, 1e-9 * std::max(1.0, max_abs(h))))
    throw std::invalid_argument("free_evolution: Hamiltonian is not Hermitian");
  const Operator off = h - Operator(h.diagonal().asDiagonal());
  if (max_abs(off) == 0.0) {
    Mat4 u = Mat4::Zero();
    for (int k = 0; k < 4; ++k) u(k, k) = std::exp(-kI * h(k, k).real() * tau);
    return Unitary::from_matrix(u);
  }
  const Mat4 arg = (-kI * tau) * h;
  return Unitary::from_matrix(matrix_exp(arg));
}

}  // namespace twospin

#endif  // TWOSPIN_SPINOPS_HPP_
