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

// Complex-matrix and superoperator algebra for a single qubit.
//
// Conventions used throughout the library:
//
//   * Operators are vectorized by stacking columns: vec(X) = (X00, X10, X01, X11).
//     With this choice vec(A X B) = (B^T (x) A) vec(X), so the conjugation map
//     X -> A X A^dagger has superoperator conj(A) (x) A.
//   * Two-qubit states use the ordering |ab> -> 2a + b; the first tensor factor is
//     the most significant one and kron(A, B) acts with A on the first factor.
//   * The qubit basis is |0> = ground, |1> = excited; sigma_minus = |0><1|.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "kdivis/errors.hpp"
#include "kdivis/tolerances.hpp"

namespace kdivis {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;
using Mat16 = Eigen::Matrix<Complex, 16, 16>;
using Vec16 = Eigen::Matrix<Complex, 16, 1>;

inline constexpr Complex kI{0.0, 1.0};

namespace pauli {

inline Mat2 identity() { return Mat2::Identity(); }

inline Mat2 x() {
  Mat2 m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline Mat2 y() {
  Mat2 m;
  m << 0.0, -kI, kI, 0.0;
  return m;
}

inline Mat2 z() {
  Mat2 m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

/// sigma_j for j = 1, 2, 3; j = 0 gives the identity.
inline Mat2 by_index(int j) {
  switch (j) {
    case 0: return identity();
    case 1: return x();
    case 2: return y();
    case 3: return z();
    default: throw InvalidArgument("pauli index out of range: " + std::to_string(j));
  }
}

/// |0><1|: lowers the excited state |1> to the ground state |0>.
inline Mat2 lower() {
  Mat2 m;
  m << 0.0, 1.0, 0.0, 0.0;
  return m;
}

inline Mat2 raise() { return lower().adjoint(); }

}  // namespace pauli

template <typename DA, typename DB>
Eigen::Matrix<Complex, int{DA::RowsAtCompileTime} * int{DB::RowsAtCompileTime},
              int{DA::ColsAtCompileTime} * int{DB::ColsAtCompileTime}>
kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  constexpr int R = int{DA::RowsAtCompileTime} * int{DB::RowsAtCompileTime};
  constexpr int C = int{DA::ColsAtCompileTime} * int{DB::ColsAtCompileTime};
  Eigen::Matrix<Complex, R, C> out;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Column-stacking vectorization of a square matrix.
template <typename Derived>
Eigen::Matrix<Complex, Derived::RowsAtCompileTime * Derived::ColsAtCompileTime, 1>
vectorize(const Eigen::MatrixBase<Derived>& m) {
  constexpr int N = Derived::RowsAtCompileTime * Derived::ColsAtCompileTime;
  Eigen::Matrix<Complex, N, 1> v;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) v(i + j * m.rows()) = m(i, j);
  return v;
}

inline Mat2 unvectorize(const Vec4& v) {
  Mat2 m;
  m << v(0), v(2), v(1), v(3);
  return m;
}

inline Mat4 unvectorize(const Vec16& v) {
  Mat4 m;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) m(i, j) = v(i + 4 * j);
  return m;
}

template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

namespace detail {

#ifndef NDEBUG
template <int N>
void check_eigen_residuals(const Eigen::Matrix<Complex, N, N>& h,
                           const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Complex, N, N>>& es,
                           double bound) {
  const auto& vecs = es.eigenvectors();
  for (int k = 0; k < N; ++k) {
    const double r = (h * vecs.col(k) - es.eigenvalues()(k) * vecs.col(k)).norm();
    if (r > bound) throw Error("eigen-decomposition residual " + std::to_string(r) + " too large");
  }
}
#endif

}  // namespace detail

/// Ascending eigenvalues of a Hermitian matrix; only the lower triangle is read.
template <int N>
Eigen::Matrix<double, N, 1> hermitian_eigenvalues(const Eigen::Matrix<Complex, N, N>& h) {
#ifndef NDEBUG
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Complex, N, N>> es(h, Eigen::ComputeEigenvectors);
  detail::check_eigen_residuals<N>(h, es, kDefaultTolerances.eigen_residual * (1.0 + h.norm()));
#else
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Complex, N, N>> es(h, Eigen::EigenvaluesOnly);
#endif
  return es.eigenvalues();
}

/// Closed-form eigenvalues (ascending) of a Hermitian 2x2 matrix.
inline std::array<double, 2> hermitian_eigenvalues(const Mat2& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const double mean = 0.5 * (a + d);
  const double rad = std::hypot(0.5 * (a - d), std::abs(h(1, 0)));
  return {mean - rad, mean + rad};
}

/// Tr sqrt(A^dagger A), the sum of singular values.
template <typename Derived>
double trace_norm(const Eigen::MatrixBase<Derived>& a) {
  using M = Eigen::Matrix<Complex, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  Eigen::JacobiSVD<M> svd(a.derived().eval());
  return svd.singularValues().sum();
}

/// Smallest eigenvalue of a Hermitian matrix. Throws NotHermitian when the
/// symmetry defect exceeds `tol`.
template <int N>
double min_eigenvalue(const Eigen::Matrix<Complex, N, N>& h, double tol = kDefaultTolerances.check) {
  const double defect = hermiticity_defect(h);
  if (defect > tol) throw NotHermitian("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  if constexpr (N == 2) {
    return hermitian_eigenvalues(Mat2(h))[0];
  } else {
    return hermitian_eigenvalues<N>(h)(0);
  }
}

// ---------------------------------------------------------------------------
// Value types
// ---------------------------------------------------------------------------

/// Qubit Bloch vector, |r| <= 1.
class BlochVector {
 public:
  BlochVector() : r_(Eigen::Vector3d::Zero()) {}
  explicit BlochVector(const Eigen::Vector3d& r, const Tolerances& tol = kDefaultTolerances) : r_(r) {
    if (!r.allFinite() || r.norm() > 1.0 + tol.construct)
      throw InvalidState("Bloch vector must have norm <= 1");
  }
  BlochVector(double x, double y, double z) : BlochVector(Eigen::Vector3d(x, y, z)) {}

  const Eigen::Vector3d& vector() const { return r_; }
  double operator[](int i) const { return r_(i); }
  double norm() const { return r_.norm(); }

 private:
  Eigen::Vector3d r_;
};

class HermitianOperator {
 public:
  explicit HermitianOperator(const Mat2& m, const Tolerances& tol = kDefaultTolerances) : m_(m) {
    if (hermiticity_defect(m) > tol.construct) throw NotHermitian("operator is not Hermitian");
  }
  const Mat2& matrix() const { return m_; }

 private:
  Mat2 m_;
};

/// Qubit density matrix: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Mat2& m, const Tolerances& tol = kDefaultTolerances) : m_(m) {
    if (hermiticity_defect(m) > tol.construct) throw NotHermitian("density matrix is not Hermitian");
    if (std::abs(m.trace() - 1.0) > tol.construct) throw InvalidState("density matrix trace differs from 1");
    if (hermitian_eigenvalues(m)[0] < tol.min_state_eigenvalue)
      throw InvalidState("density matrix has a negative eigenvalue");
  }

  /// rho = (I + r . sigma) / 2
  static DensityMatrix from_bloch(const BlochVector& r) {
    const Eigen::Vector3d& v = r.vector();
    return DensityMatrix(0.5 * (pauli::identity() + v(0) * pauli::x() + v(1) * pauli::y() + v(2) * pauli::z()));
  }
  static DensityMatrix ground() { return from_bloch(BlochVector(0, 0, 1)); }
  static DensityMatrix excited() { return from_bloch(BlochVector(0, 0, -1)); }
  static DensityMatrix maximally_mixed() { return from_bloch(BlochVector()); }
  /// p |1><1| + (1 - p) |0><0|
  static DensityMatrix diagonal(double excited_population) {
    if (!(excited_population >= 0.0 && excited_population <= 1.0))
      throw InvalidState("population must lie in [0, 1]");
    Mat2 m = Mat2::Zero();
    m(0, 0) = 1.0 - excited_population;
    m(1, 1) = excited_population;
    return DensityMatrix(m);
  }

  const Mat2& matrix() const { return m_; }

  BlochVector bloch() const {
    Eigen::Vector3d r((m_ * pauli::x()).trace().real(), (m_ * pauli::y()).trace().real(),
                      (m_ * pauli::z()).trace().real());
    if (r.norm() > 1.0) r /= r.norm();
    return BlochVector(r);
  }

 private:
  Mat2 m_;
};

/// Linear map on 2x2 operators, stored as the 4x4 matrix acting on vec(X).
class SuperOperator {
 public:
  SuperOperator() : m_(Mat4::Zero()) {}
  explicit SuperOperator(const Mat4& m) : m_(m) {}

  static SuperOperator identity() { return SuperOperator(Mat4::Identity()); }

  /// X -> A X A^dagger
  static SuperOperator conjugation(const Mat2& a) { return SuperOperator(kron(a.conjugate(), a)); }

  /// X -> Tr(X) I / 2
  static SuperOperator completely_depolarizing() {
    const Vec4 id = vectorize(Mat2(Mat2::Identity()));
    return SuperOperator(0.5 * id * id.transpose());
  }

  /// X -> X^T
  static SuperOperator transpose_map() {
    Mat4 m = Mat4::Zero();
    m(0, 0) = m(3, 3) = 1.0;
    m(1, 2) = m(2, 1) = 1.0;
    return SuperOperator(m);
  }

  /// Unital map scaling the Bloch components by mu = (mu_x, mu_y, mu_z).
  static SuperOperator pauli_diagonal(const std::array<double, 3>& mu) {
    Mat4 m = Mat4::Zero();
    for (int j = 0; j < 4; ++j) {
      const Vec4 v = vectorize(pauli::by_index(j));
      const double scale = j == 0 ? 1.0 : mu[j - 1];
      m += 0.5 * scale * v * v.adjoint();
    }
    return SuperOperator(m);
  }

  const Mat4& matrix() const { return m_; }

 private:
  Mat4 m_;
};

/// (I (x) E)(|Psi><Psi|) for the normalized maximally entangled |Psi>.
class ChoiMatrix {
 public:
  explicit ChoiMatrix(const Mat4& m) : m_(m) {}
  const Mat4& matrix() const { return m_; }
  Complex trace() const { return m_.trace(); }

 private:
  Mat4 m_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

inline Mat2 apply_map(const SuperOperator& e, const Mat2& x) { return unvectorize(Vec4(e.matrix() * vectorize(x))); }

/// (compose(a, b))(X) = a(b(X))
inline SuperOperator compose(const SuperOperator& a, const SuperOperator& b) {
  return SuperOperator(a.matrix() * b.matrix());
}

/// Ratio of extreme singular values; infinity for an exactly singular matrix.
template <typename Derived>
double condition_number(const Eigen::MatrixBase<Derived>& m) {
  using M = Eigen::Matrix<Complex, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  Eigen::JacobiSVD<M> svd(m.derived().eval());
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

/// Matrix inverse of a superoperator. Throws SingularMap when the condition
/// number exceeds `max_condition`; never falls back to a pseudo-inverse.
inline SuperOperator invert(const SuperOperator& e, double max_condition = kDefaultTolerances.max_condition) {
  const double cond = condition_number(e.matrix());
  if (!(cond <= max_condition)) throw SingularMap(cond);
  return SuperOperator(e.matrix().partialPivLu().inverse());
}

/// C[2i + k, 2j + l] = E(|i><j|)[k, l] / 2; trace 1 when E is trace preserving.
inline ChoiMatrix choi_of(const SuperOperator& e) {
  const Mat4& m = e.matrix();
  Mat4 c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) c(2 * i + k, 2 * j + l) = 0.5 * m(k + 2 * l, i + 2 * j);
  return ChoiMatrix(c);
}

inline SuperOperator superop_of_choi(const ChoiMatrix& choi) {
  const Mat4& c = choi.matrix();
  Mat4 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) m(k + 2 * l, i + 2 * j) = 2.0 * c(2 * i + k, 2 * j + l);
  return SuperOperator(m);
}

enum class Subsystem { First, Second };

/// Trace over the `traced` tensor factor of a two-qubit operator.
inline Mat2 partial_trace_env(const Mat4& x, Subsystem traced) {
  Mat2 out = Mat2::Zero();
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      for (int k = 0; k < 2; ++k) {
        out(r, c) += traced == Subsystem::First ? x(2 * k + r, 2 * k + c) : x(2 * r + k, 2 * c + k);
      }
  return out;
}

/// Half the trace norm of rho1 - rho2.
inline double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  const auto ev = hermitian_eigenvalues(Mat2(rho1.matrix() - rho2.matrix()));
  return 0.5 * (std::abs(ev[0]) + std::abs(ev[1]));
}

/// Trace norm of a Hermitian 2x2 matrix via its closed-form spectrum.
inline double hermitian_trace_norm(const Mat2& h) {
  const auto ev = hermitian_eigenvalues(h);
  return std::abs(ev[0]) + std::abs(ev[1]);
}

/// Tr E(X) = Tr X for all X, checked through vec(I)^T M = vec(I)^T.
inline bool is_trace_preserving(const SuperOperator& e, double tol = kDefaultTolerances.check) {
  const Vec4 id = vectorize(Mat2(Mat2::Identity()));
  return (id.transpose() * e.matrix() - id.transpose()).cwiseAbs().maxCoeff() <= tol;
}

/// Maps each element of the Hermitian basis {I, X, Y, Z} to a Hermitian operator.
inline bool is_hermiticity_preserving(const SuperOperator& e, double tol = kDefaultTolerances.check) {
  for (int j = 0; j < 4; ++j)
    if (hermiticity_defect(apply_map(e, pauli::by_index(j))) > tol) return false;
  return true;
}

}  // namespace kdivis
