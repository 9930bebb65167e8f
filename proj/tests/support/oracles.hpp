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

// Random maps and brute-force reference computations used as oracles. Each
// oracle is built from definitions rather than the library's fast paths.

#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "kdivis/kdivis.hpp"

namespace kdivis::testing {

using Rng = std::mt19937_64;

inline Complex gaussian_complex(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng), n(rng)};
}

/// Kraus operators of a random CPTP map with `rank` Kraus operators, from a
/// random isometry C^2 -> C^(2 rank).
inline std::vector<Mat2> random_kraus(Rng& rng, int rank) {
  Eigen::MatrixXcd g(2 * rank, 2);
  for (int r = 0; r < 2 * rank; ++r)
    for (int c = 0; c < 2; ++c) g(r, c) = gaussian_complex(rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(2 * rank, 2);
  std::vector<Mat2> kraus;
  for (int k = 0; k < rank; ++k) kraus.emplace_back(q.block(2 * k, 0, 2, 2));
  return kraus;
}

/// The map X -> sum_k K_k X K_k^dagger, assembled entry by entry from its
/// action on the matrix units.
inline SuperOperator superop_from_kraus(const std::vector<Mat2>& kraus) {
  Mat4 m = Mat4::Zero();
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) {
      Mat2 unit = Mat2::Zero();
      unit(i, j) = 1.0;
      Mat2 out = Mat2::Zero();
      for (const auto& k : kraus) out += k * unit * k.adjoint();
      for (int c = 0; c < 2; ++c)
        for (int r = 0; r < 2; ++r) m(r + 2 * c, i + 2 * j) = out(r, c);
    }
  return SuperOperator(m);
}

inline SuperOperator random_cptp(Rng& rng) {
  std::uniform_int_distribution<int> rank(1, 4);
  return superop_from_kraus(random_kraus(rng, rank(rng)));
}

/// Random Hermiticity-preserving trace-preserving map from a random affine
/// Bloch map r -> T r + c, usually neither CP nor positive.
inline SuperOperator random_affine_map(Rng& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::Matrix3d t;
  Eigen::Vector3d c;
  for (int i = 0; i < 3; ++i) {
    c(i) = u(rng) * 0.5;
    for (int j = 0; j < 3; ++j) t(i, j) = u(rng);
  }
  // Image of I/2 is (I + c.sigma)/2; image of sigma_j/2 is (T e_j).sigma / 2.
  Mat4 m = Mat4::Zero();
  auto image_of_unit = [&](int i, int j) {
    // |i><j| = sum over Pauli components.
    Mat2 unit = Mat2::Zero();
    unit(i, j) = 1.0;
    const Complex a0 = 0.5 * unit.trace();
    Mat2 out = a0 * (pauli::identity() + c(0) * pauli::x() + c(1) * pauli::y() + c(2) * pauli::z());
    for (int k = 1; k <= 3; ++k) {
      const Complex ak = 0.5 * (pauli::by_index(k) * unit).trace();
      out += ak * (t(0, k - 1) * pauli::x() + t(1, k - 1) * pauli::y() + t(2, k - 1) * pauli::z());
    }
    return out;
  };
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) {
      const Mat2 out = image_of_unit(i, j);
      for (int cc = 0; cc < 2; ++cc)
        for (int r = 0; r < 2; ++r) m(r + 2 * cc, i + 2 * j) = out(r, cc);
    }
  return SuperOperator(m);
}

/// Choi matrix from its definition: sum_ij |i><j| (x) E(|i><j|) / 2.
inline Mat4 brute_choi(const SuperOperator& e) {
  Mat4 c = Mat4::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Mat2 unit = Mat2::Zero();
      unit(i, j) = 1.0;
      c += 0.5 * kron(unit, apply_map(e, unit));
    }
  return c;
}

inline double brute_min_eigenvalue(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Smallest output eigenvalue over pure inputs on a dense (theta, phi) grid.
inline double brute_positivity_witness(const SuperOperator& e, int n_theta = 181, int n_phi = 360) {
  double best = 1e300;
  for (int a = 0; a < n_theta; ++a) {
    const double theta = std::numbers::pi * a / (n_theta - 1);
    for (int b = 0; b < n_phi; ++b) {
      const double phi = 2.0 * std::numbers::pi * b / n_phi;
      const Mat2 rho = 0.5 * (pauli::identity() + std::sin(theta) * std::cos(phi) * pauli::x() +
                              std::sin(theta) * std::sin(phi) * pauli::y() + std::cos(theta) * pauli::z());
      best = std::min(best, brute_min_eigenvalue(apply_map(e, rho)));
    }
  }
  return best;
}

/// Composite trapezoid on n panels.
template <typename F>
double trapezoid(const F& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + i * h);
  return s * h;
}

/// Superoperator of the unital map with diagonal Bloch matrix mu, from the
/// Pauli expansion of each matrix unit.
inline Mat4 pauli_diagonal_reference(const std::array<double, 3>& mu) {
  Mat4 m = Mat4::Zero();
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) {
      Mat2 unit = Mat2::Zero();
      unit(i, j) = 1.0;
      Mat2 out = 0.5 * unit.trace() * pauli::identity();
      for (int k = 1; k <= 3; ++k) out += mu[k - 1] * 0.5 * (pauli::by_index(k) * unit).trace() * pauli::by_index(k);
      for (int c = 0; c < 2; ++c)
        for (int r = 0; r < 2; ++r) m(r + 2 * c, i + 2 * j) = out(r, c);
    }
  return m;
}

/// Damping amplitude from G'' + lambda G' + (gamma0 lambda / 2) G = 0,
/// G(0) = 1, G'(0) = 0, integrated with fine RK4.
inline double damping_amplitude_ode(double gamma0, double lambda, double t, int steps_per_unit = 2000) {
  const int n = std::max(1, static_cast<int>(std::ceil(t * steps_per_unit)));
  const double h = t / n;
  double g = 1.0, v = 0.0;
  auto acc = [&](double gg, double vv) { return -lambda * vv - 0.5 * gamma0 * lambda * gg; };
  for (int i = 0; i < n; ++i) {
    const double k1g = v, k1v = acc(g, v);
    const double k2g = v + 0.5 * h * k1v, k2v = acc(g + 0.5 * h * k1g, v + 0.5 * h * k1v);
    const double k3g = v + 0.5 * h * k2v, k3v = acc(g + 0.5 * h * k2g, v + 0.5 * h * k2v);
    const double k4g = v + h * k3v, k4v = acc(g + h * k3g, v + h * k3v);
    g += h / 6.0 * (k1g + 2 * k2g + 2 * k3g + k4g);
    v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }
  return g;
}

/// Superoperator of the Bloch-affine map rho -> (I + (B r).sigma) / 2 with a
/// 3x3 real matrix B (unital).
inline Mat4 bloch_matrix_superop(const Eigen::Matrix3d& b) {
  Mat4 m = Mat4::Zero();
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) {
      Mat2 unit = Mat2::Zero();
      unit(i, j) = 1.0;
      Mat2 out = 0.5 * unit.trace() * pauli::identity();
      for (int k = 1; k <= 3; ++k) {
        const Complex ak = 0.5 * (pauli::by_index(k) * unit).trace();
        for (int l = 1; l <= 3; ++l) out += ak * b(l - 1, k - 1) * pauli::by_index(l);
      }
      for (int c = 0; c < 2; ++c)
        for (int r = 0; r < 2; ++r) m(r + 2 * c, i + 2 * j) = out(r, c);
    }
  return m;
}

}  // namespace kdivis::testing
