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

#ifndef TWOSPIN_TOMOGRAPHY_HPP_
#define TWOSPIN_TOMOGRAPHY_HPP_

#include <algorithm>
#include <array>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twospin/error.hpp"
#include "twospin/linalg.hpp"
#include "twospin/spinops.hpp"
#include "twospin/states.hpp"

namespace twospin {

// Reduced tomography: four readout settings, each followed by detection of the
// four single-quantum elements (0,2), (1,3), (0,1), (2,3).

enum class ReadoutSetting { II, IX, IY, XX };

inline constexpr std::array<ReadoutSetting, 4> kReadoutSettings{
    ReadoutSetting::II, ReadoutSetting::IX, ReadoutSetting::IY, ReadoutSetting::XX};

inline std::string_view to_string(ReadoutSetting s) {
  switch (s) {
    case ReadoutSetting::II: return "II";
    case ReadoutSetting::IX: return "IX";
    case ReadoutSetting::IY: return "IY";
    case ReadoutSetting::XX: return "XX";
  }
  return "?";
}

inline std::optional<ReadoutSetting> parse_readout_setting(std::string_view name) {
  for (auto s : kReadoutSettings)
    if (to_string(s) == name) return s;
  return std::nullopt;
}

/// Observed elements in readout order.
inline constexpr std::array<std::pair<int, int>, 4> kObservedElements{
    {{0, 2}, {1, 3}, {0, 1}, {2, 3}}};

inline constexpr int kObservablesPerSetting = 8;

/// Rotation applied before acquisition; X and Y are selective pi/2 pulses.
inline Unitary readout_unitary(ReadoutSetting s) {
  constexpr double half_pi = 0.5 * kPi;
  switch (s) {
    case ReadoutSetting::II: return Unitary::identity();
    case ReadoutSetting::IX: return pulse(half_pi, PulsePhase::x, PulseTarget::spin2);
    case ReadoutSetting::IY: return pulse(half_pi, PulsePhase::y, PulseTarget::spin2);
    case ReadoutSetting::XX: return pulse(half_pi, PulsePhase::x, PulseTarget::both);
  }
  throw std::invalid_argument("unknown readout setting");
}

struct TomographyRecord {
  ReadoutSetting setting = ReadoutSetting::II;
  /// Re, Im of each observed element in kObservedElements order.
  std::array<double, kObservablesPerSetting> observables{};
};

namespace detail {

inline std::array<double, kObservablesPerSetting> read_elements(const Mat4& m) {
  std::array<double, kObservablesPerSetting> out{};
  for (std::size_t k = 0; k < kObservedElements.size(); ++k) {
    const cplx v = m(kObservedElements[k].first, kObservedElements[k].second);
    out[2 * k] = v.real();
    out[2 * k + 1] = v.imag();
  }
  return out;
}

/// Traceless Hermitian basis spanning the 15 free parameters of a unit-trace
/// Hermitian 4x4 matrix.
inline const std::array<Mat4, 15>& traceless_basis() {
  static const std::array<Mat4, 15> basis = [] {
    std::array<Mat4, 15> b;
    std::size_t n = 0;
    for (int k = 0; k < 3; ++k) {
      Mat4 m = Mat4::Zero();
      m(k, k) = 1.0;
      m(3, 3) = -1.0;
      b[n++] = m;
    }
    for (int r = 0; r < 4; ++r)
      for (int c = r + 1; c < 4; ++c) {
        Mat4 re = Mat4::Zero();
        re(r, c) = 1.0;
        re(c, r) = 1.0;
        b[n++] = re;
        Mat4 im = Mat4::Zero();
        im(r, c) = -kI;
        im(c, r) = kI;
        b[n++] = im;
      }
    return b;
  }();
  return basis;
}

}  // namespace detail

inline TomographyRecord simulate_readout(const DensityMatrix& rho, ReadoutSetting setting) {
  return {setting, detail::read_elements(readout_unitary(setting).conjugate(rho.matrix()))};
}

inline std::vector<TomographyRecord> simulate_all_readouts(const DensityMatrix& rho) {
  std::vector<TomographyRecord> out;
  for (auto s : kReadoutSettings) out.push_back(simulate_readout(rho, s));
  return out;
}

/// 32 x 15 linear map from basis coefficients to observables, obtained by
/// pushing each basis element through the readout rotations.
inline const Eigen::Matrix<double, 32, 15>& tomography_design_matrix() {
  static const Eigen::Matrix<double, 32, 15> design = [] {
    Eigen::Matrix<double, 32, 15> a;
    const auto& basis = detail::traceless_basis();
    for (std::size_t s = 0; s < kReadoutSettings.size(); ++s) {
      const Unitary u = readout_unitary(kReadoutSettings[s]);
      for (std::size_t k = 0; k < basis.size(); ++k) {
        const auto obs = detail::read_elements(u.conjugate(basis[k]));
        for (std::size_t j = 0; j < obs.size(); ++j)
          a(static_cast<int>(s * kObservablesPerSetting + j), static_cast<int>(k)) = obs[j];
      }
    }
    return a;
  }();
  return design;
}

struct Reconstruction {
  Mat4 estimate;         // Hermitian, unit trace; may be slightly non-PSD under noise
  double residual_norm;  // ||A x - b||_2 over all observables
};

/// Least-squares estimate of rho from one record per setting.
inline Reconstruction reconstruct_raw(std::span<const TomographyRecord> records) {
  Eigen::Matrix<double, 32, 1> b;
  std::array<bool, 4> seen{};
  if (records.size() != kReadoutSettings.size())
    throw DataError("reconstruct: expected exactly one record per setting (II, IX, IY, XX)");
  for (const auto& rec : records) {
    const auto s = static_cast<std::size_t>(rec.setting);
    if (seen[s])
      throw DataError("reconstruct: duplicate record for setting " +
                      std::string(to_string(rec.setting)));
    seen[s] = true;
    for (std::size_t j = 0; j < rec.observables.size(); ++j) {
      const double v = rec.observables[j];
      if (!std::isfinite(v) || v < -1.0 || v > 1.0)
        throw DataError("reconstruct: observable outside [-1, 1] in setting " +
                        std::string(to_string(rec.setting)));
      b(static_cast<int>(s * kObservablesPerSetting + j)) = v;
    }
  }
  const auto& a = tomography_design_matrix();
  Eigen::ColPivHouseholderQR<Eigen::Matrix<double, 32, 15>> qr(a);
  if (qr.rank() < 15) throw std::runtime_error("reconstruct: design matrix is rank deficient");
  const Eigen::Matrix<double, 15, 1> x = qr.solve(b);

  Mat4 rho = Mat4::Identity() * 0.25;
  const auto& basis = detail::traceless_basis();
  for (std::size_t k = 0; k < basis.size(); ++k) rho += x(static_cast<int>(k)) * basis[k];
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  return {rho, (a * x - b).norm()};
}

/// Nearest density matrix by clipping negative eigenvalues and renormalizing.
inline DensityMatrix project_to_state(const Mat4& hermitian) {
  Eigen::SelfAdjointEigenSolver<Mat4> solver(0.5 * (hermitian + hermitian.adjoint()));
  Eigen::Vector4d vals = solver.eigenvalues().cwiseMax(0.0);
  if (!(vals.sum() > 0.0)) throw DataError("no positive part to project onto");
  vals /= vals.sum();
  const Mat4 m = solver.eigenvectors() * vals.cast<cplx>().asDiagonal() *
                 solver.eigenvectors().adjoint();
  return DensityMatrix::from_matrix(0.5 * (m + m.adjoint()));
}

/// Reconstructed state; projected onto the PSD cone only if the raw estimate
/// has eigenvalues below -1e-10.
inline DensityMatrix reconstruct(std::span<const TomographyRecord> records) {
  const Reconstruction r = reconstruct_raw(records);
  if (min_eigenvalue(r.estimate) >= -DensityMatrix::kEigenTol)
    return DensityMatrix::from_matrix(r.estimate);
  return project_to_state(r.estimate);
}

/// Uhlmann-Jozsa fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2, clamped to [0, 1].
inline double fidelity(const Mat4& a, const Mat4& b) {
  constexpr double tol = 1e-10;
  if (!is_hermitian(a, tol) || !is_hermitian(b, tol))
    throw std::invalid_argument("fidelity: inputs must be Hermitian");
  // Eigenvalues within round-off of zero are set to zero before taking square
  // roots; otherwise rank-deficient (e.g. pure) inputs pick up sqrt(1e-17) ~ 3e-9
  // errors.
  auto floored_sqrt = [](const Eigen::Vector4d& vals) {
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * vals.cwiseAbs().maxCoeff();
    Eigen::Vector4d out;
    for (int k = 0; k < 4; ++k) out(k) = vals(k) > floor ? std::sqrt(vals(k)) : 0.0;
    return out;
  };
  Eigen::SelfAdjointEigenSolver<Mat4> ea(0.5 * (a + a.adjoint()));
  const Mat4 root_a =
      ea.eigenvectors() * floored_sqrt(ea.eigenvalues()).cast<cplx>().asDiagonal() * ea.eigenvectors().adjoint();
  const Mat4 inner = root_a * (0.5 * (b + b.adjoint())) * root_a;
  Eigen::SelfAdjointEigenSolver<Mat4> solver(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  const double tr = floored_sqrt(solver.eigenvalues()).sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

inline double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  return fidelity(a.matrix(), b.matrix());
}

}  // namespace twospin

#endif  // TWOSPIN_TOMOGRAPHY_HPP_
