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

#include "twospin/spinops.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

namespace twospin {
namespace {

Mat4 diag(double a, double b, double c, double d) {
  Mat4 m = Mat4::Zero();
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  m(3, 3) = d;
  return m;
}

TEST(PauliTest, ZOnEachSpinHasTensorOrderedDiagonal) {
  EXPECT_LE(max_abs(pauli(Spin::one, Axis::z) - diag(1, 1, -1, -1)), 0.0);
  EXPECT_LE(max_abs(pauli(Spin::two, Axis::z) - diag(1, -1, 1, -1)), 0.0);
}

TEST(PauliTest, EveryEmbeddingIsHermitianInvolution) {
  for (auto s : {Spin::one, Spin::two})
    for (auto a : {Axis::x, Axis::y, Axis::z}) {
      const Operator p = pauli(s, a);
      EXPECT_TRUE(is_hermitian(p, 0.0));
      EXPECT_LE(max_abs(p * p - Mat4::Identity()), 1e-15);
    }
}

TEST(PauliTest, AngularMomentumIsHalfPauli) {
  for (auto s : {Spin::one, Spin::two})
    for (auto a : {Axis::x, Axis::y, Axis::z})
      EXPECT_LE(max_abs(angular_momentum(s, a) - 0.5 * pauli(s, a)), 0.0);
}

TEST(PauliTest, OperatorsOnDifferentSpinsCommute) {
  for (auto a : {Axis::x, Axis::y, Axis::z})
    for (auto b : {Axis::x, Axis::y, Axis::z}) {
      const Operator p = pauli(Spin::one, a), q = pauli(Spin::two, b);
      EXPECT_LE(max_abs(p * q - q * p), 1e-15);
    }
}

TEST(HamiltonianTest, OnResonanceUncoupledSpinOneLeavesOnlySpinTwoOffset) {
  const SpinSystem s{"test", 500.0, 320.0, 0.0};
  const Operator h = hamiltonian(s, s.nu1);
  const Operator expected = -2.0 * kPi * (s.nu2 - s.nu1) * angular_momentum(Spin::two, Axis::z);
  EXPECT_LE(max_abs(h - expected), 1e-9);
}

TEST(HamiltonianTest, PresetsCarryPublishedShiftsAndCouplings) {
  const auto btc = spin_system_preset("btc");
  ASSERT_TRUE(btc);
  EXPECT_EQ(btc->nu1, 4602.4);
  EXPECT_EQ(btc->nu2, 4287.0);
  EXPECT_EQ(btc->j12, 4.2);
  const auto cyt = spin_system_preset("cytosine");
  ASSERT_TRUE(cyt);
  EXPECT_EQ(cyt->nu1, 4407.7);
  EXPECT_EQ(cyt->nu2, 3490.8);
  EXPECT_EQ(cyt->j12, 7.1);
  const auto cou = spin_system_preset("coumarin");
  ASSERT_TRUE(cou);
  EXPECT_EQ(cou->nu1, 4734.0);
  EXPECT_EQ(cou->nu2, 3807.9);
  EXPECT_EQ(cou->j12, 9.5);
  EXPECT_FALSE(spin_system_preset("water"));
  for (const char* name : {"btc", "cytosine", "coumarin"}) EXPECT_TRUE(spin_system_preset(name)->weakly_coupled());
}

TEST(HamiltonianTest, IsDiagonalHermitianAndLinearInParameters) {
  const SpinSystem a{"a", 4602.4, 4287.0, 4.2};
  const SpinSystem b{"b", 100.0, -35.0, 7.5};
  const SpinSystem sum{"sum", a.nu1 + b.nu1, a.nu2 + b.nu2, a.j12 + b.j12};
  const double nu_rf = 0.0;
  const Operator h = hamiltonian(a, 4444.0);
  EXPECT_TRUE(is_hermitian(h, 0.0));
  EXPECT_LE(max_abs(h - Operator(h.diagonal().asDiagonal())), 0.0);
  EXPECT_LE(max_abs(hamiltonian(sum, nu_rf) - hamiltonian(a, nu_rf) - hamiltonian(b, nu_rf)), 1e-9);
}

TEST(HamiltonianTest, DetectsStrongCoupling) {
  EXPECT_FALSE((SpinSystem{"strong", 100.0, 90.0, 5.0}).weakly_coupled());
}

TEST(PulseTest, PiOnBothSpinsInvertsPopulations) {
  const Unitary u = pulse(kPi, PulsePhase::x, PulseTarget::both);
  EXPECT_LE(max_abs(u.conjugate(diag(1, 0, 0, 0)) - diag(0, 0, 0, 1)), 1e-15);
}

TEST(PulseTest, ZeroAngleIsIdentity) {
  EXPECT_LE(max_abs(pulse(0.0, PulsePhase::y, PulseTarget::spin1).matrix() - Mat4::Identity()), 0.0);
}

TEST(PulseTest, HalfPiYOnSpinOneMakesSuperpositionFromGround) {
  const Vec4 out = pulse(0.5 * kPi, PulsePhase::y, PulseTarget::spin1).apply(Vec4::Unit(0));
  Vec4 expected = Vec4::Zero();
  expected(0) = expected(2) = 1.0 / std::sqrt(2.0);
  EXPECT_LE(max_abs(out - expected), 1e-15);
}

TEST(PulseTest, SelectivePulseActsAsIdentityOnOtherSpin) {
  const Unitary u = pulse(0.7, PulsePhase::minus_y, PulseTarget::spin2);
  const Mat4 z1 = pauli(Spin::one, Axis::z);
  EXPECT_LE(max_abs(u.conjugate(z1) - z1), 1e-15);
}

TEST(PulseTest, OppositePhasesAreInverse) {
  for (auto t : {PulseTarget::spin1, PulseTarget::spin2, PulseTarget::both}) {
    const Unitary a = pulse(1.1, PulsePhase::x, t) * pulse(1.1, PulsePhase::minus_x, t);
    const Unitary b = pulse(0.4, PulsePhase::y, t) * pulse(0.4, PulsePhase::minus_y, t);
    EXPECT_LE(max_abs(a.matrix() - Mat4::Identity()), 1e-15);
    EXPECT_LE(max_abs(b.matrix() - Mat4::Identity()), 1e-15);
  }
}

TEST(PulseTest, MatchesExponentialOfAngularMomentum) {
  const Operator gen = angular_momentum(Spin::one, Axis::y) + angular_momentum(Spin::two, Axis::y);
  const Mat4 expected = matrix_exp(Mat4(cplx(0, -1.3) * gen));
  EXPECT_LE(max_abs(pulse(1.3, PulsePhase::y, PulseTarget::both).matrix() - expected), 1e-14);
}

TEST(PulseTest, RejectsNonFiniteAngle) {
  EXPECT_THROW(pulse(std::nan(""), PulsePhase::x, PulseTarget::both), std::invalid_argument);
}

TEST(FreeEvolutionTest, ZeroDelayIsIdentity) {
  const Operator h = hamiltonian(*spin_system_preset("btc"), 4400.0);
  EXPECT_LE(max_abs(free_evolution(h, 0.0).matrix() - Mat4::Identity()), 0.0);
}

TEST(FreeEvolutionTest, DiagonalHamiltonianGivesPhases) {
  const Operator h = diag(1.0, -2.0, 0.5, 3.0).cast<cplx>();
  const Mat4 u = free_evolution(h, 0.3).matrix();
  for (int k = 0; k < 4; ++k) EXPECT_LE(std::abs(u(k, k) - std::exp(cplx(0, -0.3) * h(k, k))), 1e-15);
}

TEST(FreeEvolutionTest, CouplingOnlyHalfPeriodGivesQuarterPiPhases) {
  const double j = 4.2;
  const SpinSystem s{"j-only", 0.0, 0.0, j};
  const Mat4 u = free_evolution(hamiltonian(s, 0.0), 1.0 / (2.0 * j)).matrix();
  const cplx m = std::exp(cplx(0, -kPi / 4)), p = std::exp(cplx(0, kPi / 4));
  EXPECT_LE(std::abs(u(0, 0) - m), 1e-14);
  EXPECT_LE(std::abs(u(1, 1) - p), 1e-14);
  EXPECT_LE(std::abs(u(2, 2) - p), 1e-14);
  EXPECT_LE(std::abs(u(3, 3) - m), 1e-14);
}

TEST(FreeEvolutionTest, NonDiagonalHamiltonianIsUnitary) {
  std::mt19937_64 rng(7);
  const Mat4 h = testing::random_hermitian(rng);
  const Unitary u = free_evolution(h, 0.8);
  EXPECT_TRUE(Unitary::is_unitary(u.matrix()));
  EXPECT_LE(max_abs(free_evolution(h, 0.4).matrix() * free_evolution(h, 0.4).matrix() - u.matrix()), 1e-12);
}

TEST(FreeEvolutionTest, RejectsNegativeDelayAndNonHermitian) {
  EXPECT_THROW(free_evolution(Mat4::Identity(), -1.0), std::invalid_argument);
  Mat4 nh = Mat4::Zero();
  nh(0, 1) = 1.0;
  EXPECT_THROW(free_evolution(nh, 1.0), std::invalid_argument);
}

TEST(FreeEvolutionTest, EchoRefocusesChemicalShifts) {
  // tau/2 - pi_x - tau/2 - pi_x under shifts + J equals evolution under J alone.
  const SpinSystem s = *spin_system_preset("cytosine");
  const double tau = 1.0 / (2.0 * s.j12);
  const double nu_rf = 4000.0;
  const Unitary half = free_evolution(hamiltonian(s, nu_rf), 0.5 * tau);
  const Unitary pi = pulse(kPi, PulsePhase::x, PulseTarget::both);
  const Unitary echo = pi * half * pi * half;
  const SpinSystem j_only{"j", nu_rf, nu_rf, s.j12};
  const Unitary reference = free_evolution(hamiltonian(j_only, nu_rf), tau);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat4 rho = testing::random_state_matrix<4>(rng);
    const Mat4 a = echo.conjugate(rho), b = reference.conjugate(rho);
    EXPECT_LE(max_abs(a - b), 1e-9);
  }
}

TEST(UnitaryTest, FromMatrixRejectsNonUnitary) {
  EXPECT_THROW(Unitary::from_matrix(2.0 * Mat4::Identity()), std::invalid_argument);
  EXPECT_NO_THROW(Unitary::from_matrix(pauli(Spin::one, Axis::y)));
}

}  // namespace
}  // namespace twospin
