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

#include "twospin/tomography.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

namespace twospin {
namespace {

Vec4 random_ket(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec4 v;
  for (int k = 0; k < 4; ++k) v(k) = cplx(g(rng), g(rng));
  return v.normalized();
}

TEST(ReadoutTest, MaximallyMixedShowsNothing) {
  for (auto s : kReadoutSettings)
    for (double v : simulate_readout(DensityMatrix::maximally_mixed(), s).observables) EXPECT_NEAR(v, 0.0, 1e-16);
}

TEST(ReadoutTest, DirectElementRead) {
  const auto rec = simulate_readout(coherence_state(CoherenceKind::SQ1), ReadoutSetting::II);
  EXPECT_NEAR(rec.observables[0], 0.5, 1e-15);
  EXPECT_NEAR(rec.observables[1], 0.0, 1e-15);
}

TEST(ReadoutTest, DoubleQuantumIsInvisibleWithoutRotation) {
  for (double v : simulate_readout(coherence_state(CoherenceKind::DQ), ReadoutSetting::II).observables)
    EXPECT_NEAR(v, 0.0, 1e-16);
  // The phase of the double-quantum coherence still shows up in the rotated
  // settings: (|00> + |11>) and (|00> - |11>) give different records.
  Vec4 minus = Vec4::Zero();
  minus(0) = minus(3) = 1.0 / std::sqrt(2.0);
  minus(3) *= -1.0;
  const auto plus_records = simulate_all_readouts(coherence_state(CoherenceKind::DQ));
  const auto minus_records = simulate_all_readouts(DensityMatrix::pure(minus));
  double difference = 0.0;
  for (std::size_t s = 0; s < plus_records.size(); ++s)
    for (std::size_t k = 0; k < kObservablesPerSetting; ++k)
      difference += std::abs(plus_records[s].observables[k] - minus_records[s].observables[k]);
  EXPECT_GT(difference, 0.1);
}

TEST(ReadoutTest, SettingNamesRoundTrip) {
  for (auto s : kReadoutSettings) EXPECT_EQ(parse_readout_setting(to_string(s)), s);
  EXPECT_FALSE(parse_readout_setting("YY"));
}

TEST(ReconstructTest, DesignMatrixHasFullRank) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(tomography_design_matrix());
  EXPECT_GT(svd.singularValues().minCoeff(), 0.5);
}

TEST(ReconstructTest, RoundTripOnRandomStates) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const DensityMatrix rho = testing::random_state(rng);
    const auto records = simulate_all_readouts(rho);
    EXPECT_LE((reconstruct(records).matrix() - rho.matrix()).norm(), 1e-10);
  }
}

TEST(ReconstructTest, RoundTripOnPureStatesWithoutProjection) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = DensityMatrix::pure(random_ket(rng));
    EXPECT_LE((reconstruct_raw(simulate_all_readouts(rho)).estimate - rho.matrix()).norm(), 1e-10);
    EXPECT_LE((reconstruct(simulate_all_readouts(rho)).matrix() - rho.matrix()).norm(), 1e-10);
  }
}

TEST(ReconstructTest, RecordOrderDoesNotMatter) {
  std::mt19937_64 rng(43);
  const DensityMatrix rho = testing::random_state(rng);
  auto records = simulate_all_readouts(rho);
  std::reverse(records.begin(), records.end());
  EXPECT_LE((reconstruct(records).matrix() - rho.matrix()).norm(), 1e-10);
}

TEST(ReconstructTest, ZeroRecordsGiveMaximallyMixed) {
  std::vector<TomographyRecord> records;
  for (auto s : kReadoutSettings) records.push_back({s, {}});
  EXPECT_LE(max_abs(reconstruct(records).matrix() - 0.25 * Mat4::Identity()), 1e-15);
}

TEST(ReconstructTest, SmallNoiseGivesProportionalError) {
  std::mt19937_64 rng(44);
  std::normal_distribution<double> noise(0.0, 1e-3);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const DensityMatrix rho = testing::random_state(rng);
    auto records = simulate_all_readouts(rho);
    for (auto& r : records)
      for (auto& v : r.observables) v += noise(rng);
    worst = std::max(worst, (reconstruct(records).matrix() - rho.matrix()).norm());
  }
  EXPECT_GT(worst, 1e-5);
  EXPECT_LT(worst, 1e-2);
}

TEST(ReconstructTest, ProjectsNoisyEstimatesOntoStates) {
  // A pure state plus noise typically produces a slightly negative eigenvalue.
  std::mt19937_64 rng(45);
  std::normal_distribution<double> noise(0.0, 2e-2);
  const DensityMatrix rho = coherence_state(CoherenceKind::DQ);
  auto records = simulate_all_readouts(rho);
  for (auto& r : records)
    for (auto& v : r.observables) v = std::clamp(v + noise(rng), -1.0, 1.0);
  const DensityMatrix out = reconstruct(records);
  EXPECT_GE(min_eigenvalue(out.matrix()), -1e-10);
  EXPECT_GT(fidelity(out, rho), 0.9);
}

TEST(ReconstructTest, RejectsIncompleteOrInvalidRecords) {
  const auto full = simulate_all_readouts(DensityMatrix::maximally_mixed());
  std::vector<TomographyRecord> three(full.begin(), full.begin() + 3);
  EXPECT_THROW(reconstruct(three), DataError);
  auto dup = full;
  dup[3].setting = ReadoutSetting::II;
  EXPECT_THROW(reconstruct(dup), DataError);
  auto out_of_range = full;
  out_of_range[1].observables[2] = 1.5;
  EXPECT_THROW(reconstruct(out_of_range), DataError);
}

TEST(FidelityTest, Basics) {
  std::mt19937_64 rng(46);
  const DensityMatrix rho = testing::random_state(rng);
  EXPECT_NEAR(fidelity(rho, rho), 1.0, 1e-10);
  const auto k00 = DensityMatrix::pure(basis_ket(0)), k11 = DensityMatrix::pure(basis_ket(3));
  EXPECT_NEAR(fidelity(k00, k11), 0.0, 1e-12);
  EXPECT_NEAR(fidelity(k00, DensityMatrix::maximally_mixed()), 0.25, 1e-12);
}

TEST(FidelityTest, SymmetricBoundedAndUnitarilyInvariant) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat4 a = testing::random_state_matrix<4>(rng), b = testing::random_state_matrix<4>(rng);
    const double f = fidelity(a, b);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
    EXPECT_NEAR(f, fidelity(b, a), 1e-10);
    const Mat4 u = testing::random_unitary(rng);
    EXPECT_NEAR(f, fidelity(Mat4(u * a * u.adjoint()), Mat4(u * b * u.adjoint())), 1e-10);
  }
}

TEST(FidelityTest, PureArgumentReducesToExpectationValue) {
  std::mt19937_64 rng(48);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec4 psi = random_ket(rng);
    const Mat4 sigma = testing::random_state_matrix<4>(rng);
    const double expected = (psi.adjoint() * sigma * psi)(0).real();
    EXPECT_NEAR(fidelity(DensityMatrix::pure(psi).matrix(), sigma), expected, 1e-10);
    EXPECT_NEAR(fidelity(sigma, DensityMatrix::pure(psi).matrix()), expected, 1e-10);
  }
}

TEST(FidelityTest, CommutingStatesGiveClassicalOverlap) {
  // For diagonal states F = (sum_k sqrt(p_k q_k))^2.
  const Eigen::Vector4d p(0.1, 0.2, 0.3, 0.4), q(0.4, 0.3, 0.2, 0.1);
  double bc = 0.0;
  for (int k = 0; k < 4; ++k) bc += std::sqrt(p(k) * q(k));
  EXPECT_NEAR(fidelity(Mat4(p.cast<cplx>().asDiagonal()), Mat4(q.cast<cplx>().asDiagonal())), bc * bc, 1e-12);
}

TEST(FidelityTest, RejectsNonHermitian) {
  Mat4 m = 0.25 * Mat4::Identity();
  m(0, 1) = 0.2;
  EXPECT_THROW(fidelity(m, Mat4(0.25 * Mat4::Identity())), std::invalid_argument);
}

}  // namespace
}  // namespace twospin
