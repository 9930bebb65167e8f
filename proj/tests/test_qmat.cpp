// Copyright 2026 The kdivis Authors
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

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "kdivis/kdivis.hpp"
#include "support/oracles.hpp"

namespace kdivis {
namespace {

using testing::Rng;

Mat2 random_matrix(Rng& rng) {
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = testing::gaussian_complex(rng);
  return m;
}

template <int N>
Eigen::Matrix<Complex, N, N> random_hermitian(Rng& rng) {
  Eigen::Matrix<Complex, N, N> m;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) m(i, j) = testing::gaussian_complex(rng);
  return 0.5 * (m + m.adjoint());
}

DensityMatrix random_state(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::Vector3d v(n(rng), n(rng), n(rng));
  return DensityMatrix::from_bloch(BlochVector(v.normalized() * std::cbrt(u(rng))));
}

TEST(Vectorize, IsColumnMajor) {
  Mat2 x;
  x << 1.0, 2.0, 3.0, 4.0;
  const Vec4 v = vectorize(x);
  EXPECT_EQ(v(0), Complex(1.0));
  EXPECT_EQ(v(1), Complex(3.0));
  EXPECT_EQ(v(2), Complex(2.0));
  EXPECT_EQ(v(3), Complex(4.0));
  EXPECT_EQ(unvectorize(v), x);
}

TEST(Vectorize, SandwichIdentity) {
  Rng rng(11);
  for (int k = 0; k < 20; ++k) {
    const Mat2 a = random_matrix(rng), b = random_matrix(rng), x = random_matrix(rng);
    const Vec4 lhs = vectorize(Mat2(a * x * b));
    const Vec4 rhs = kron(Mat2(b.transpose()), a) * vectorize(x);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Kron, FirstFactorIsMostSignificant) {
  Mat2 a;
  a << 1.0, 2.0, 3.0, 4.0;
  Mat2 b;
  b << 5.0, 6.0, 7.0, 8.0;
  const Mat4 k = kron(a, b);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) EXPECT_EQ(k(2 * i + r, 2 * j + c), a(i, j) * b(r, c));
}

TEST(SuperOperator, ConjugationMatchesDirectProduct) {
  Rng rng(12);
  for (int k = 0; k < 20; ++k) {
    const Mat2 a = random_matrix(rng), x = random_matrix(rng);
    const Mat2 direct = a * x * a.adjoint();
    EXPECT_LT((apply_map(SuperOperator::conjugation(a), x) - direct).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(SuperOperator, PauliDiagonalMatchesPauliExpansion) {
  const std::array<double, 3> mu{0.3, -0.7, 0.9};
  EXPECT_LT((SuperOperator::pauli_diagonal(mu).matrix() - testing::pauli_diagonal_reference(mu)).cwiseAbs().maxCoeff(),
            1e-15);
}

TEST(SuperOperator, ComposeIsAssociativeAndActsRightToLeft) {
  Rng rng(13);
  for (int k = 0; k < 20; ++k) {
    const SuperOperator a = testing::random_cptp(rng), b = testing::random_cptp(rng), c = testing::random_cptp(rng);
    const Mat2 x = random_matrix(rng);
    EXPECT_LT((compose(compose(a, b), c).matrix() - compose(a, compose(b, c)).matrix()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((apply_map(compose(a, b), x) - apply_map(a, apply_map(b, x))).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(SuperOperator, RandomChannelsPreserveTraceAndHermiticity) {
  Rng rng(14);
  for (int k = 0; k < 50; ++k) {
    const SuperOperator e = testing::random_cptp(rng);
    EXPECT_TRUE(is_trace_preserving(e));
    EXPECT_TRUE(is_hermiticity_preserving(e));
  }
  Mat4 not_tp = Mat4::Identity();
  not_tp(0, 0) = 0.5;
  EXPECT_FALSE(is_trace_preserving(SuperOperator(not_tp)));
}

TEST(Choi, KnownMaps) {
  // Identity: projector onto the maximally entangled state.
  const Eigen::Vector4d id_ev = hermitian_eigenvalues<4>(choi_of(SuperOperator::identity()).matrix());
  EXPECT_NEAR(id_ev(3), 1.0, 1e-14);
  EXPECT_NEAR(id_ev(0), 0.0, 1e-14);
  // Completely depolarizing: I / 4.
  EXPECT_LT((choi_of(SuperOperator::completely_depolarizing()).matrix() - 0.25 * Mat4::Identity()).cwiseAbs().maxCoeff(),
            1e-15);
  // Transpose: the swap operator / 2 with spectrum {-1/2, 1/2, 1/2, 1/2}.
  const ChoiMatrix t = choi_of(SuperOperator::transpose_map());
  EXPECT_NEAR(std::abs(t.trace()), 1.0, 1e-15);
  EXPECT_NEAR(min_eigenvalue<4>(t.matrix()), -0.5, 1e-14);
  EXPECT_NEAR(min_eigenvalue<4>(Mat4(2.0 * t.matrix())), -1.0, 1e-14);
}

TEST(Eigen, HermitianEigenvaluesMatchReferenceSolver) {
  Rng rng(15);
  for (int k = 0; k < 50; ++k) {
    const Mat4 h = random_hermitian<4>(rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es{Eigen::MatrixXcd(h)};
    const Eigen::Vector4d ev = hermitian_eigenvalues<4>(h);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(ev(i), es.eigenvalues()(i), 1e-12);
    const Mat2 h2 = random_hermitian<2>(rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es2{Eigen::MatrixXcd(h2)};
    const auto ev2 = hermitian_eigenvalues(h2);
    EXPECT_NEAR(ev2[0], es2.eigenvalues()(0), 1e-12);
    EXPECT_NEAR(ev2[1], es2.eigenvalues()(1), 1e-12);
  }
}

TEST(Eigen, MinEigenvalueRejectsNonHermitian) {
  Mat4 m = Mat4::Identity();
  m(0, 1) = 1.0;
  EXPECT_THROW(min_eigenvalue<4>(m), NotHermitian);
}

TEST(TraceNorm, SvdAgreesWithSpectrumForHermitian) {
  Rng rng(16);
  for (int k = 0; k < 50; ++k) {
    const Mat4 h = random_hermitian<4>(rng);
    EXPECT_NEAR(trace_norm(h), hermitian_eigenvalues<4>(h).cwiseAbs().sum(), 1e-11);
    const Mat2 h2 = random_hermitian<2>(rng);
    EXPECT_NEAR(hermitian_trace_norm(h2), trace_norm(h2), 1e-12);
  }
}

TEST(TraceNorm, NonHermitianUsesSingularValues) {
  Rng rng(17);
  const Mat2 a = random_matrix(rng);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es{Eigen::MatrixXcd(a.adjoint() * a)};
  const double expected = std::sqrt(std::max(0.0, es.eigenvalues()(0))) + std::sqrt(es.eigenvalues()(1));
  EXPECT_NEAR(trace_norm(a), expected, 1e-12);
}

TEST(TraceDistance, IsAMetricBoundedByOne) {
  Rng rng(18);
  EXPECT_NEAR(trace_distance(DensityMatrix::ground(), DensityMatrix::excited()), 1.0, 1e-15);
  for (int k = 0; k < 100; ++k) {
    const DensityMatrix a = random_state(rng), b = random_state(rng), c = random_state(rng);
    const double ab = trace_distance(a, b);
    EXPECT_NEAR(ab, trace_distance(b, a), 1e-15);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0 + 1e-12);
    EXPECT_LE(trace_distance(a, c), ab + trace_distance(b, c) + 1e-12);
    EXPECT_NEAR(trace_distance(a, a), 0.0, 1e-15);
  }
}

TEST(TraceDistance, EqualsHalfBlochDistance) {
  const DensityMatrix a = DensityMatrix::from_bloch(BlochVector(0.3, -0.2, 0.5));
  const DensityMatrix b = DensityMatrix::from_bloch(BlochVector(-0.1, 0.4, 0.0));
  EXPECT_NEAR(trace_distance(a, b), 0.5 * std::sqrt(0.16 + 0.36 + 0.25), 1e-14);
}

TEST(Invert, RoundTripAndSingularRejection) {
  Rng rng(19);
  const SuperOperator e = SuperOperator::pauli_diagonal({0.5, -0.4, 0.8});
  EXPECT_LT((compose(invert(e), e).matrix() - Mat4::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(invert(SuperOperator::completely_depolarizing()), SingularMap);
  try {
    invert(SuperOperator::pauli_diagonal({1.0, 1.0, 1e-10}), 1e8);
    FAIL() << "expected SingularMap";
  } catch (const SingularMap& s) {
    EXPECT_GT(s.condition(), 1e8);
  }
  EXPECT_TRUE(std::isinf(condition_number(SuperOperator::completely_depolarizing().matrix())));
}

TEST(PartialTrace, OfProductOperator) {
  Rng rng(20);
  const Mat2 a = random_matrix(rng), b = random_matrix(rng);
  const Mat4 ab = kron(a, b);
  EXPECT_LT((partial_trace_env(ab, Subsystem::First) - a.trace() * b).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((partial_trace_env(ab, Subsystem::Second) - b.trace() * a).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(States, ValidationRejectsUnphysicalInput) {
  Mat2 not_herm = Mat2::Identity() / 2.0;
  not_herm(0, 1) = 0.3;
  EXPECT_THROW(DensityMatrix{not_herm}, NotHermitian);
  EXPECT_THROW(DensityMatrix{Mat2(Mat2::Identity())}, InvalidState);
  Mat2 negative = Mat2::Zero();
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix{negative}, InvalidState);
  EXPECT_THROW(BlochVector(1.0, 1.0, 0.0), InvalidState);
  EXPECT_THROW(DensityMatrix::diagonal(1.5), InvalidState);
  EXPECT_NO_THROW(DensityMatrix::diagonal(0.0));
}

TEST(States, GroundAndExcitedConventions) {
  EXPECT_NEAR(DensityMatrix::ground().matrix()(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(DensityMatrix::excited().matrix()(1, 1).real(), 1.0, 1e-15);
  // sigma_minus lowers |1> to |0>.
  const Mat2 lowered = pauli::lower() * DensityMatrix::excited().matrix() * pauli::raise();
  EXPECT_NEAR(lowered(0, 0).real(), 1.0, 1e-15);
  const BlochVector r = DensityMatrix::from_bloch(BlochVector(0.1, 0.2, -0.3)).bloch();
  EXPECT_NEAR(r[0], 0.1, 1e-15);
  EXPECT_NEAR(r[1], 0.2, 1e-15);
  EXPECT_NEAR(r[2], -0.3, 1e-15);
}

}  // namespace
}  // namespace kdivis
