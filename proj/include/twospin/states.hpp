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

#ifndef TWOSPIN_STATES_HPP_
#define TWOSPIN_STATES_HPP_

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "twospin/linalg.hpp"
#include "twospin/spinops.hpp"

namespace twospin {

/// Two-spin density matrix: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kEigenTol = 1e-10;

  DensityMatrix() : m_(Mat4::Identity() * 0.25) {}

  /// Validates `m`; throws std::invalid_argument naming the violated invariant.
  static DensityMatrix from_matrix(const Mat4& m) {
    if (!all_finite(m)) throw std::invalid_argument("density matrix has non-finite entries");
    if (!is_hermitian(m, kHermitianTol))
      throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(m.trace() - cplx(1.0)) > kTraceTol)
      throw std::invalid_argument("density matrix trace is not 1");
    if (min_eigenvalue(m) < -kEigenTol)
      throw std::invalid_argument("density matrix has a negative eigenvalue");
    return DensityMatrix(m);
  }

  static DensityMatrix maximally_mixed() { return DensityMatrix(); }

  /// |psi><psi| for a normalized (or normalizable) state vector.
  static DensityMatrix pure(const Vec4& psi) {
    const double n = psi.norm();
    if (!(n > 0.0)) throw std::invalid_argument("zero state vector");
    const Vec4 v = psi / n;
    return DensityMatrix(v * v.adjoint());
  }

  const Mat4& matrix() const { return m_; }
  cplx operator()(int r, int c) const { return m_(r, c); }

  double purity() const { return (m_ * m_).trace().real(); }

  DensityMatrix evolved(const Unitary& u) const { return DensityMatrix(u.conjugate(m_)); }

 private:
  explicit DensityMatrix(const Mat4& m) : m_(m) {}
  Mat4 m_;
};

inline Vec4 basis_ket(int index) {
  Vec4 v = Vec4::Zero();
  v(index) = 1.0;
  return v;
}

/// (I + epsilon (I1z + I2z)) / 4.
inline DensityMatrix thermal_state(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("thermal_state: epsilon must be in [0, 1]");
  const Mat4 deviation =
      angular_momentum(Spin::one, Axis::z) + angular_momentum(Spin::two, Axis::z);
  return DensityMatrix::from_matrix((Mat4::Identity() + epsilon * deviation) * 0.25);
}

/// (1 - epsilon) I/4 + epsilon |00><00|.
inline DensityMatrix pseudopure_00(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("pseudopure_00: epsilon must be in [0, 1]");
  Mat4 m = Mat4::Identity() * ((1.0 - epsilon) * 0.25);
  m(0, 0) += epsilon;
  return DensityMatrix::from_matrix(m);
}

enum class CoherenceKind { ZQ, DQ, SQ1, SQ2 };

inline std::string_view to_string(CoherenceKind kind) {
  switch (kind) {
    case CoherenceKind::ZQ: return "ZQ";
    case CoherenceKind::DQ: return "DQ";
    case CoherenceKind::SQ1: return "SQ1";
    case CoherenceKind::SQ2: return "SQ2";
  }
  return "?";
}

inline Vec4 coherence_ket(CoherenceKind kind) {
  const double s = 1.0 / std::sqrt(2.0);
  switch (kind) {
    case CoherenceKind::ZQ: return s * (basis_ket(1) + basis_ket(2));
    case CoherenceKind::DQ: return s * (basis_ket(0) + basis_ket(3));
    case CoherenceKind::SQ1: return s * (basis_ket(0) + basis_ket(2));
    case CoherenceKind::SQ2: return s * (basis_ket(0) + basis_ket(1));
  }
  throw std::invalid_argument("unknown coherence kind");
}

inline DensityMatrix coherence_state(CoherenceKind kind) {
  return DensityMatrix::pure(coherence_ket(kind));
}

/// Weight sum |rho_rs|^2 grouped by coherence order m_r - m_s in [-2, 2].
class CoherenceSpectrum {
 public:
  double weight(int order) const {
    if (order < -2 || order > 2) throw std::out_of_range("coherence order outside [-2, 2]");
    return w_[static_cast<std::size_t>(order + 2)];
  }
  double total() const { return w_[0] + w_[1] + w_[2] + w_[3] + w_[4]; }
  void add(int order, double value) { w_[static_cast<std::size_t>(order + 2)] += value; }

 private:
  std::array<double, 5> w_{};
};

/// Magnetic quantum number (in units of single-spin flips) of basis state k.
inline int magnetic_number(int k) {
  static constexpr std::array<int, 4> m{1, 0, 0, -1};
  return m[static_cast<std::size_t>(k)];
}

inline CoherenceSpectrum coherence_spectrum(const DensityMatrix& rho) {
  CoherenceSpectrum out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      out.add(magnetic_number(r) - magnetic_number(c), std::norm(rho(r, c)));
  return out;
}

/// The multiple-quantum preparation sequence as an ideal-pulse unitary.
///
/// pi/2_y on both spins, then tau/2 - pi_x(both) - tau/2 - pi_x(both) with
/// tau = 1/(2 J), then a selective pi/2 on spin 1 along -x (ZQ) or x (DQ).
inline Unitary mq_preparation_unitary(CoherenceKind target, const SpinSystem& system,
                                      double nu_rf) {
  if (target != CoherenceKind::ZQ && target != CoherenceKind::DQ)
    throw std::invalid_argument("mq_preparation_unitary: target must be ZQ or DQ");
  if (system.j12 == 0.0) throw std::invalid_argument("prepare: J12 = 0 leaves the delay undefined");
  const double tau = 1.0 / (2.0 * std::abs(system.j12));
  const Operator h = hamiltonian(system, nu_rf);
  const Unitary half = free_evolution(h, 0.5 * tau);
  const Unitary refocus = pulse(kPi, PulsePhase::x, PulseTarget::both);
  const Unitary excite = pulse(0.5 * kPi, PulsePhase::y, PulseTarget::both);
  const Unitary select = pulse(0.5 * kPi, target == CoherenceKind::ZQ ? PulsePhase::minus_x
                                                                      : PulsePhase::x,
                               PulseTarget::spin1);
  return select * refocus * half * refocus * half * excite;
}

/// Single selective pi/2_y on spin 1 (SQ1) or spin 2 (SQ2).
inline Unitary sq_preparation_unitary(CoherenceKind target) {
  if (target == CoherenceKind::SQ1) return pulse(0.5 * kPi, PulsePhase::y, PulseTarget::spin1);
  if (target == CoherenceKind::SQ2) return pulse(0.5 * kPi, PulsePhase::y, PulseTarget::spin2);
  throw std::invalid_argument("sq_preparation_unitary: target must be SQ1 or SQ2");
}

inline double default_nu_rf(const SpinSystem& system) { return 0.5 * (system.nu1 + system.nu2); }

/// Runs the ZQ/DQ preparation sequence on pseudopure_00(epsilon).
inline DensityMatrix prepare_via_sequence(CoherenceKind target, const SpinSystem& system,
                                          double epsilon, double nu_rf) {
  return pseudopure_00(epsilon).evolved(mq_preparation_unitary(target, system, nu_rf));
}

inline DensityMatrix prepare_via_sequence(CoherenceKind target, const SpinSystem& system,
                                          double epsilon) {
  return prepare_via_sequence(target, system, epsilon, default_nu_rf(system));
}

/// Any of the four coherence targets from pseudopure_00(epsilon).
inline DensityMatrix prepare(CoherenceKind target, const SpinSystem& system, double epsilon,
                             double nu_rf) {
  if (target == CoherenceKind::SQ1 || target == CoherenceKind::SQ2)
    return pseudopure_00(epsilon).evolved(sq_preparation_unitary(target));
  return prepare_via_sequence(target, system, epsilon, nu_rf);
}

}  // namespace twospin

#endif  // TWOSPIN_STATES_HPP_
