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

#ifndef TWOSPIN_CHANNELS_HPP_
#define TWOSPIN_CHANNELS_HPP_

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "twospin/error.hpp"
#include "twospin/linalg.hpp"
#include "twospin/spinops.hpp"
#include "twospin/states.hpp"

namespace twospin {

/// Decay rates (1/s) of the correlated phase damping and the two independent
/// generalized amplitude damping channels.
struct NoiseParams {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  double Gamma1 = 0.0;
  double Gamma2 = 0.0;
  double nbar = 0.5;

  /// Every diagonal entry of the dephasing generator is <= 0.
  bool nonnegative_dephasing_rates() const {
    return gamma1 >= 0.0 && gamma2 >= 0.0 && gamma1 + gamma2 - gamma3 >= 0.0 &&
           gamma1 + gamma2 + gamma3 >= 0.0;
  }

  /// Exact complete-positivity condition of the full generator: the dephasing
  /// Kossakowski block [[g1/2, g3/4], [g3/4, g2/2]] is PSD and the amplitude
  /// damping rates are non-negative.
  bool completely_positive(double tol = 1e-12) const {
    return gamma1 >= 0.0 && gamma2 >= 0.0 && Gamma1 >= 0.0 && Gamma2 >= 0.0 &&
           gamma3 * gamma3 <= 4.0 * gamma1 * gamma2 + tol;
  }

  bool finite() const {
    return std::isfinite(gamma1) && std::isfinite(gamma2) && std::isfinite(gamma3) &&
           std::isfinite(Gamma1) && std::isfinite(Gamma2) && std::isfinite(nbar);
  }

  friend bool operator==(const NoiseParams&, const NoiseParams&) = default;
};

/// Generator or map on the row-major vectorization of a 4x4 density matrix,
/// (rho00, rho01, rho02, rho03, rho10, ..., rho33).
class Superoperator {
 public:
  Superoperator() : m_(Mat16::Zero()) {}
  explicit Superoperator(const Mat16& m) : m_(m) {}

  static Superoperator zero() { return Superoperator(); }
  static Superoperator identity() { return Superoperator(Mat16::Identity()); }

  const Mat16& matrix() const { return m_; }

  Superoperator& operator+=(const Superoperator& o) {
    m_ += o.m_;
    return *this;
  }
  friend Superoperator operator+(Superoperator a, const Superoperator& b) { return a += b; }

 private:
  Mat16 m_;
};

inline constexpr int vec_index(int row, int col) { return 4 * row + col; }

inline Vec16 vectorize(const Mat4& rho) {
  Vec16 v;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) v(vec_index(r, c)) = rho(r, c);
  return v;
}

inline Mat4 devectorize(const Vec16& v) {
  Mat4 rho;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) rho(r, c) = v(vec_index(r, c));
  return rho;
}

inline Mat4 apply(const Superoperator& s, const Mat4& rho) {
  return devectorize(s.matrix() * vectorize(rho));
}

/// Row vector summing the diagonal positions of vec(rho). A generator is trace
/// preserving iff this vector annihilates it from the left.
inline Eigen::Matrix<cplx, 1, 16> trace_functional() {
  Eigen::Matrix<cplx, 1, 16> t = Eigen::Matrix<cplx, 1, 16>::Zero();
  for (int k = 0; k < 4; ++k) t(vec_index(k, k)) = 1.0;
  return t;
}

inline bool is_trace_preserving_generator(const Superoperator& z, double tol = 1e-12) {
  return max_abs(trace_functional() * z.matrix()) <= tol;
}

/// Z(rho^dagger) == Z(rho)^dagger, checked through the conjugate-transpose
/// permutation of vec positions: Z[(r,c),(k,l)] == conj(Z[(c,r),(l,k)]).
inline bool is_hermiticity_preserving(const Superoperator& z, double tol = 1e-12) {
  const Mat16& m = z.matrix();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          if (std::abs(m(vec_index(r, c), vec_index(k, l)) -
                       std::conj(m(vec_index(c, r), vec_index(l, k)))) > tol)
            return false;
  return true;
}

/// Choi matrix sum_{kl} |k><l| (x) E(|k><l|) of a map given as a superoperator.
inline Mat16 choi_matrix(const Superoperator& map) {
  Mat16 choi;
  const Mat16& s = map.matrix();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          choi(vec_index(k, i), vec_index(l, j)) = s(vec_index(i, j), vec_index(k, l));
  return choi;
}

// --- Kraus maps -------------------------------------------------------------

inline constexpr double kCompletenessTol = 1e-10;

template <typename MatT>
bool kraus_complete(std::span<const MatT> kraus, double tol = kCompletenessTol) {
  if (kraus.empty()) return false;
  MatT sum = MatT::Zero();
  for (const auto& e : kraus) sum += e.adjoint() * e;
  return max_abs(sum - MatT::Identity()) <= tol;
}

template <typename MatT>
MatT apply_kraus_unchecked(const MatT& rho, std::span<const MatT> kraus) {
  MatT out = MatT::Zero();
  for (const auto& e : kraus) out += e * rho * e.adjoint();
  return out;
}

/// sum_i E_i rho E_i^dagger. Rejects sets violating sum E^dagger E = I.
inline DensityMatrix apply_kraus(const DensityMatrix& rho, std::span<const Mat4> kraus) {
  if (!kraus_complete(kraus))
    throw std::invalid_argument("apply_kraus: Kraus set violates completeness");
  return DensityMatrix::from_matrix(apply_kraus_unchecked(rho.matrix(), kraus));
}

/// E_{i,j} = A_i (x) B_j.
inline std::vector<Mat4> product_kraus(std::span<const Mat2> spin1, std::span<const Mat2> spin2) {
  std::vector<Mat4> out;
  out.reserve(spin1.size() * spin2.size());
  for (const auto& a : spin1)
    for (const auto& b : spin2) out.emplace_back(kron(a, b));
  return out;
}

/// Same-index family E_{k,k} = A_k (x) A_k, right-multiplied by M^{-1/2} with
/// M = sum E^dagger E so that the family is complete.
inline std::vector<Mat4> correlated_kraus(std::span<const Mat2> single) {
  std::vector<Mat4> out;
  Mat4 m = Mat4::Zero();
  for (const auto& a : single) {
    out.emplace_back(kron(a, a));
    m += out.back().adjoint() * out.back();
  }
  Eigen::SelfAdjointEigenSolver<Mat4> solver(m);
  if (solver.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("correlated_kraus: family is rank deficient");
  const Mat4 inv_sqrt = solver.eigenvectors() *
                        solver.eigenvalues().cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() *
                        solver.eigenvectors().adjoint();
  for (auto& e : out) e = e * inv_sqrt;
  return out;
}

/// (1 - mu) sum E_ij rho E_ij^dagger + mu sum E_kk rho E_kk^dagger.
inline DensityMatrix correlated_mixture(const DensityMatrix& rho,
                                        std::span<const Mat4> uncorrelated,
                                        std::span<const Mat4> correlated, double mu) {
  if (!(mu >= 0.0 && mu <= 1.0))
    throw std::invalid_argument("correlated_mixture: mu must be in [0, 1]");
  if (!kraus_complete(uncorrelated) || !kraus_complete(correlated))
    throw std::invalid_argument("correlated_mixture: Kraus family violates completeness");
  const Mat4 out = (1.0 - mu) * apply_kraus_unchecked(rho.matrix(), uncorrelated) +
                   mu * apply_kraus_unchecked(rho.matrix(), correlated);
  return DensityMatrix::from_matrix(out);
}

// --- single-spin channels ---------------------------------------------------

inline void check_rate_time(double rate, double t, const char* who) {
  if (!(rate >= 0.0) || !std::isfinite(rate))
    throw std::invalid_argument(std::string(who) + ": rate must be finite and >= 0");
  if (!(t >= 0.0)) throw std::invalid_argument(std::string(who) + ": t must be >= 0");
}

/// Phase damping: coherences scale by exp(-gamma t), populations unchanged.
inline Mat2 pd_apply(const Mat2& rho, double gamma, double t) {
  check_rate_time(gamma, t, "pd_apply");
  const double f = std::exp(-gamma * t);
  Mat2 out = rho;
  out(0, 1) *= f;
  out(1, 0) *= f;
  return out;
}

inline std::vector<Mat2> pd_kraus(double gamma, double t) {
  check_rate_time(gamma, t, "pd_kraus");
  const double lambda = std::exp(-gamma * t);
  return {std::sqrt(0.5 * (1.0 + lambda)) * Mat2::Identity(),
          std::sqrt(0.5 * (1.0 - lambda)) * pauli_1spin(Axis::z)};
}

/// Generator on (rho00, rho01, rho10, rho11): diag(0, -gamma, -gamma, 0).
inline Eigen::Matrix<cplx, 4, 4> pd_generator_1spin(double gamma) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("pd_generator_1spin: gamma must be >= 0");
  Eigen::Matrix<cplx, 4, 4> z = Eigen::Matrix<cplx, 4, 4>::Zero();
  z(1, 1) = -gamma;
  z(2, 2) = -gamma;
  return z;
}

/// Generalized amplitude damping at temperature parameter nbar.
inline Mat2 gad_apply(const Mat2& rho, double Gamma, double nbar, double t) {
  check_rate_time(Gamma, t, "gad_apply");
  if (!(nbar >= 0.0 && nbar <= 1.0)) throw std::invalid_argument("gad_apply: nbar must be in [0, 1]");
  const double p = -std::expm1(-Gamma * t);
  const double k2 = (1.0 - nbar) * p;
  const double k3 = nbar * p;
  const double k1 = 1.0 - k3;
  const double k4 = 1.0 - k2;
  const double c = std::exp(-0.5 * Gamma * t);
  Mat2 out;
  out(0, 0) = k1 * rho(0, 0) + k2 * rho(1, 1);
  out(1, 1) = k3 * rho(0, 0) + k4 * rho(1, 1);
  out(0, 1) = c * rho(0, 1);
  out(1, 0) = c * rho(1, 0);
  return out;
}

inline std::vector<Mat2> gad_kraus(double Gamma, double nbar, double t) {
  check_rate_time(Gamma, t, "gad_kraus");
  if (!(nbar >= 0.0 && nbar <= 1.0)) throw std::invalid_argument("gad_kraus: nbar must be in [0, 1]");
  const double p = -std::expm1(-Gamma * t);
  const double a = std::sqrt(1.0 - nbar);
  const double b = std::sqrt(nbar);
  Mat2 e0, e1, e2, e3;
  e0 << a, 0, 0, a * std::sqrt(1.0 - p);
  e1 << 0, a * std::sqrt(p), 0, 0;
  e2 << b * std::sqrt(1.0 - p), 0, 0, b;
  e3 << 0, 0, b * std::sqrt(p), 0;
  return {e0, e1, e2, e3};
}

struct TemperatureParams {
  double delta_E = 0.0;      // J
  double temperature = 0.0;  // K
};

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K

/// nbar = 1 / (1 + exp(delta_E / (k_B T))).
inline double nbar_from_temperature(const TemperatureParams& tp) {
  if (!(tp.temperature > 0.0))
    throw std::invalid_argument("nbar_from_temperature: temperature must be > 0");
  const double x = tp.delta_E / (kBoltzmann * tp.temperature);
  if (x > 700.0) return std::exp(-x);
  return 1.0 / (1.0 + std::exp(x));
}

/// The infinite-temperature GAD generator on one spin, ordering
/// (rho00, rho01, rho10, rho11).
inline Eigen::Matrix<cplx, 4, 4> gad_highT_generator_1spin(double Gamma) {
  if (!(Gamma >= 0.0)) throw std::invalid_argument("gad generator: Gamma must be >= 0");
  Eigen::Matrix<cplx, 4, 4> z;
  z << 0.5, 0, 0, -0.5,
       0, 0.5, 0, 0,
       0, 0, 0.5, 0,
       -0.5, 0, 0, 0.5;
  return -Gamma * z;
}

/// Lifts a single-spin superoperator (ordering rho00, rho01, rho10, rho11) to
/// the two-spin row-major space, acting as the identity map on the other spin.
inline Superoperator lift_1spin(const Eigen::Matrix<cplx, 4, 4>& s, Spin spin) {
  Mat16 out = Mat16::Zero();
  auto idx = [](int a1, int a2, int b1, int b2) { return vec_index(2 * a1 + a2, 2 * b1 + b2); };
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          const cplx v = s(2 * a + b, 2 * c + d);
          if (v == cplx(0.0)) continue;
          // (a, b) -> row/col indices of the acted-on spin; (x, y) spectator.
          for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
              if (spin == Spin::one)
                out(idx(a, x, b, y), idx(c, x, d, y)) += v;
              else
                out(idx(x, a, y, b), idx(x, c, y, d)) += v;
            }
        }
  return Superoperator(out);
}

inline Superoperator gad_highT_generator(double Gamma, Spin spin) {
  return lift_1spin(gad_highT_generator_1spin(Gamma), spin);
}

/// Diagonal correlated phase damping generator. Throws NonPhysicalError if any
/// diagonal entry would be positive.
inline Superoperator cpd_generator(double gamma1, double gamma2, double gamma3) {
  NoiseParams p;
  p.gamma1 = gamma1;
  p.gamma2 = gamma2;
  p.gamma3 = gamma3;
  if (!p.finite()) throw std::invalid_argument("cpd_generator: non-finite rate");
  if (!p.nonnegative_dephasing_rates())
    throw NonPhysicalError("cpd_generator: rates give a growing coherence (need gamma1, gamma2 >= 0 "
                           "and gamma1 + gamma2 >= |gamma3|)");
  const double dq = gamma1 + gamma2 + gamma3;
  const double zq = gamma1 + gamma2 - gamma3;
  const double diag[16] = {0,       -gamma2, -gamma1, -dq,
                           -gamma2, 0,       -zq,     -gamma1,
                           -gamma1, -zq,     0,       -gamma2,
                           -dq,     -gamma1, -gamma2, 0};
  Mat16 m = Mat16::Zero();
  for (int k = 0; k < 16; ++k) m(k, k) = diag[k];
  return Superoperator(m);
}

inline void validate(const NoiseParams& p) {
  if (!p.finite()) throw std::invalid_argument("noise parameters must be finite");
  if (p.Gamma1 < 0.0 || p.Gamma2 < 0.0)
    throw NonPhysicalError("noise parameters: Gamma1 and Gamma2 must be >= 0");
  if (!(p.nbar >= 0.0 && p.nbar <= 1.0))
    throw std::invalid_argument("noise parameters: nbar must be in [0, 1]");
  if (!p.nonnegative_dephasing_rates())
    throw NonPhysicalError("noise parameters: gamma1, gamma2 >= 0 and gamma1 + gamma2 >= |gamma3| "
                           "required");
}

/// CPD + GAD(spin 1) + GAD(spin 2), both amplitude damping channels in the
/// infinite-temperature limit. `nbar` is not used by this generator.
inline Superoperator full_generator(const NoiseParams& p) {
  validate(p);
  return cpd_generator(p.gamma1, p.gamma2, p.gamma3) + gad_highT_generator(p.Gamma1, Spin::one) +
         gad_highT_generator(p.Gamma2, Spin::two);
}

/// Generator sum_k L rho L^dagger - {L^dagger L, rho}/2 built from Lindblad
/// operators, using vec(A rho B) = (A (x) B^T) vec(rho) for row-major vec.
inline Superoperator lindblad_generator(std::span<const Mat4> jump_ops) {
  Mat16 z = Mat16::Zero();
  const Mat4 id = Mat4::Identity();
  for (const auto& l : jump_ops) {
    const Mat4 ldl = l.adjoint() * l;
    z += kron(l, l.conjugate());
    z -= 0.5 * kron(ldl, id);
    z -= 0.5 * kron(id, Mat4(ldl.transpose()));
  }
  return Superoperator(z);
}

/// Lindblad operators reproducing cpd_generator(gamma1, gamma2, gamma3):
/// the Kossakowski block [[g1/2, g3/4], [g3/4, g2/2]] over (sigma_z1, sigma_z2)
/// diagonalized into independent jump operators.
inline std::vector<Mat4> cpd_jump_operators(double gamma1, double gamma2, double gamma3) {
  NoiseParams p;
  p.gamma1 = gamma1;
  p.gamma2 = gamma2;
  p.gamma3 = gamma3;
  if (!p.completely_positive())
    throw NonPhysicalError("cpd_jump_operators: rates are not completely positive");
  Eigen::Matrix2d k;
  k << gamma1 / 2.0, gamma3 / 4.0, gamma3 / 4.0, gamma2 / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(k);
  const Mat4 z1 = pauli(Spin::one, Axis::z);
  const Mat4 z2 = pauli(Spin::two, Axis::z);
  std::vector<Mat4> out;
  for (int i = 0; i < 2; ++i) {
    const double w = std::max(solver.eigenvalues()(i), 0.0);
    if (w == 0.0) continue;
    const auto v = solver.eigenvectors().col(i);
    out.emplace_back(std::sqrt(w) * (v(0) * z1 + v(1) * z2));
  }
  return out;
}

}  // namespace twospin

#endif  // TWOSPIN_CHANNELS_HPP_
