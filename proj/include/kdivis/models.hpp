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

// The four dynamics families: Pauli dephasing with time-dependent rates,
// amplitude damping in a Lorentzian reservoir, a target qubit driven through a
// C-NOT by a mixed control qubit, and a two-atom superradiant pair.

#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "kdivis/qmat.hpp"

namespace kdivis {

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

namespace detail {

inline double simpson_recurse(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                              double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (!std::isfinite(delta)) throw QuadratureFailure("non-finite integrand");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) throw QuadratureFailure("adaptive Simpson did not converge");
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b]. Throws QuadratureFailure when
/// the recursion depth is exhausted before the error estimate reaches `tol`.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-10,
                               int max_depth = 40) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_recurse(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// ---------------------------------------------------------------------------
// Rate functions
// ---------------------------------------------------------------------------

/// A decay rate gamma(t) from the closed preset vocabulary (`const:c`,
/// `tanh-neg`, `sin`, `sin-neg`) or a user callable integrated numerically.
class RateFunction {
 public:
  enum class Kind { Constant, NegTanh, Sin, NegSin, Custom };

  RateFunction() = default;

  static RateFunction constant(double c) { return RateFunction(Kind::Constant, c); }
  static RateFunction neg_tanh() { return RateFunction(Kind::NegTanh, 0.0); }
  static RateFunction sine() { return RateFunction(Kind::Sin, 0.0); }
  static RateFunction neg_sine() { return RateFunction(Kind::NegSin, 0.0); }
  static RateFunction custom(std::function<double(double)> f, std::string label = "custom") {
    RateFunction r(Kind::Custom, 0.0);
    r.fn_ = std::move(f);
    r.label_ = std::move(label);
    return r;
  }

  /// Accepts the preset vocabulary and bare numbers (shorthand for `const:`).
  static RateFunction parse(std::string_view text) {
    const std::string s(text);
    if (s == "tanh-neg") return neg_tanh();
    if (s == "sin") return sine();
    if (s == "sin-neg") return neg_sine();
    std::string_view num = text;
    if (num.rfind("const:", 0) == 0) num.remove_prefix(6);
    try {
      std::size_t used = 0;
      const std::string n(num);
      const double c = std::stod(n, &used);
      if (used == n.size() && std::isfinite(c)) return constant(c);
    } catch (const std::exception&) {
    }
    throw InvalidArgument("unknown rate function '" + s + "' (expected const:c, tanh-neg, sin or sin-neg)");
  }

  Kind kind() const { return kind_; }
  double constant_value() const { return c_; }

  std::string name() const {
    switch (kind_) {
      case Kind::Constant: {
        char buf[64];
        std::snprintf(buf, sizeof buf, "const:%.17g", c_);
        return buf;
      }
      case Kind::NegTanh: return "tanh-neg";
      case Kind::Sin: return "sin";
      case Kind::NegSin: return "sin-neg";
      case Kind::Custom: return label_;
    }
    return {};
  }

  double operator()(double t) const {
    switch (kind_) {
      case Kind::Constant: return c_;
      case Kind::NegTanh: return -std::tanh(t);
      case Kind::Sin: return std::sin(t);
      case Kind::NegSin: return -std::sin(t);
      case Kind::Custom: return fn_(t);
    }
    return 0.0;
  }

  /// Integral over [a, b]; closed form for presets.
  double integral(double a, double b) const {
    switch (kind_) {
      case Kind::Constant: return c_ * (b - a);
      case Kind::NegTanh: return log_cosh(a) - log_cosh(b);
      case Kind::Sin: return std::cos(a) - std::cos(b);
      case Kind::NegSin: return std::cos(b) - std::cos(a);
      case Kind::Custom: return adaptive_simpson(fn_, a, b, 1e-10);
    }
    return 0.0;
  }

  double integral(double t) const { return integral(0.0, t); }

  friend bool operator==(const RateFunction& a, const RateFunction& b) {
    return a.kind_ == b.kind_ && a.c_ == b.c_ && a.kind_ != Kind::Custom;
  }

 private:
  RateFunction(Kind k, double c) : kind_(k), c_(c) {}

  static double log_cosh(double x) {
    const double ax = std::abs(x);
    return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
  }

  Kind kind_ = Kind::Constant;
  double c_ = 0.0;
  std::function<double(double)> fn_;
  std::string label_;
};

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// Superoperator form of an instantaneous generator acting on vec(rho):
/// N = 4 for one qubit, N = 16 for the joint two-qubit generators.
template <int N>
struct Generator {
  Eigen::Matrix<Complex, N, N> matrix = Eigen::Matrix<Complex, N, N>::Zero();
};

using GeneratorAt = Generator<4>;
using JointGenerator = Generator<16>;

/// vec(I)^T L = 0: the generated flow keeps the trace fixed.
template <int N>
bool is_trace_annihilating(const Generator<N>& gen, double tol = kDefaultTolerances.check) {
  constexpr int D = N == 4 ? 2 : 4;
  const auto id = vectorize(Eigen::Matrix<Complex, D, D>(Eigen::Matrix<Complex, D, D>::Identity()));
  return (id.transpose() * gen.matrix).cwiseAbs().maxCoeff() <= tol;
}

namespace lindblad {

/// rho -> -i [H, rho]
template <int D>
Eigen::Matrix<Complex, D * D, D * D> hamiltonian(const Eigen::Matrix<Complex, D, D>& h) {
  using Sq = Eigen::Matrix<Complex, D, D>;
  const Sq id = Sq::Identity();
  return -kI * (kron(id, h) - kron(Sq(h.transpose()), id));
}

/// rho -> A rho B^dagger - (B^dagger A rho + rho B^dagger A) / 2
template <int D>
Eigen::Matrix<Complex, D * D, D * D> dissipator(const Eigen::Matrix<Complex, D, D>& a,
                                                const Eigen::Matrix<Complex, D, D>& b) {
  using Sq = Eigen::Matrix<Complex, D, D>;
  const Sq id = Sq::Identity();
  const Sq bda = b.adjoint() * a;
  return kron(Sq(b.conjugate()), a) - 0.5 * kron(id, bda) - 0.5 * kron(Sq(bda.transpose()), id);
}

}  // namespace lindblad

// ---------------------------------------------------------------------------
// Pauli dephasing channel
// ---------------------------------------------------------------------------

/// drho/dt = 1/2 sum_j gamma_j(t) (sigma_j rho sigma_j - rho)
struct PauliChannelModel {
  std::array<RateFunction, 3> rates{RateFunction::constant(0), RateFunction::constant(0), RateFunction::constant(0)};

  static PauliChannelModel constant(double g1, double g2, double g3) {
    return {{RateFunction::constant(g1), RateFunction::constant(g2), RateFunction::constant(g3)}};
  }
  /// gamma_1 = gamma_2 = 1, gamma_3 = -tanh t
  static PauliChannelModel hall() {
    return {{RateFunction::constant(1), RateFunction::constant(1), RateFunction::neg_tanh()}};
  }
  /// gamma_1 = 1, gamma_2 = -gamma_3 = sin t
  static PauliChannelModel eternal_sine() {
    return {{RateFunction::constant(1), RateFunction::sine(), RateFunction::neg_sine()}};
  }

  std::array<double, 3> rates_at(double t) const { return {rates[0](t), rates[1](t), rates[2](t)}; }

  friend bool operator==(const PauliChannelModel&, const PauliChannelModel&) = default;
};

inline GeneratorAt pauli_generator(const PauliChannelModel& model, double t) {
  GeneratorAt gen;
  for (int j = 1; j <= 3; ++j) {
    const double g = model.rates[j - 1](t);
    if (g == 0.0) continue;
    const Mat2 s = pauli::by_index(j);
    gen.matrix += 0.5 * g * (kron(Mat2(s.conjugate()), s) - Mat4::Identity());
  }
  return gen;
}

/// Bloch eigenvalues of a Pauli-diagonal map whose generator rates integrate to
/// `integrated` over the interval: mu_j = exp(-G_k - G_l), (j, k, l) cyclic.
inline std::array<double, 3> pauli_bloch_from_integrated(const std::array<double, 3>& integrated) {
  return {std::exp(-integrated[1] - integrated[2]), std::exp(-integrated[2] - integrated[0]),
          std::exp(-integrated[0] - integrated[1])};
}

/// Gamma_j over [a, b] for the three rates.
inline std::array<double, 3> pauli_integrated_rates(const PauliChannelModel& model, double a, double b) {
  return {model.rates[0].integral(a, b), model.rates[1].integral(a, b), model.rates[2].integral(a, b)};
}

inline std::array<double, 3> pauli_bloch_eigenvalues(const PauliChannelModel& model, double t) {
  return pauli_bloch_from_integrated(pauli_integrated_rates(model, 0.0, t));
}

inline SuperOperator pauli_propagator_analytic(const PauliChannelModel& model, double t) {
  return SuperOperator::pauli_diagonal(pauli_bloch_eigenvalues(model, t));
}

// ---------------------------------------------------------------------------
// Amplitude damping with a Lorentzian reservoir
// ---------------------------------------------------------------------------

/// Coupling gamma0 and Lorentzian width lambda, both positive.
struct AmplitudeDampingModel {
  double gamma0 = 1.0;
  double lambda = 1.0;

  void validate() const {
    if (!(gamma0 > 0.0) || !(lambda > 0.0) || !std::isfinite(gamma0) || !std::isfinite(lambda))
      throw InvalidArgument("amplitude damping requires gamma0 > 0 and lambda > 0");
  }

  friend bool operator==(const AmplitudeDampingModel&, const AmplitudeDampingModel&) = default;
};

/// J(omega) = gamma0 lambda^2 / (2 pi (omega^2 + lambda^2))
inline double lorentzian_spectral_density(const AmplitudeDampingModel& m, double omega) {
  return m.gamma0 * m.lambda * m.lambda / (2.0 * std::numbers::pi * (omega * omega + m.lambda * m.lambda));
}

namespace detail {

// C(t) = e^{-lambda t/2} cosh(d t/2) and S(t) = e^{-lambda t/2} sinh(d t/2)/d with
// d^2 = lambda^2 - 2 gamma0 lambda; continued analytically through d = 0.
struct DampingParts {
  double c;
  double s;
};

inline DampingParts damping_parts(const AmplitudeDampingModel& m, double t) {
  const double lam = m.lambda;
  const double disc = lam * lam - 2.0 * m.gamma0 * lam;
  const double u2 = disc * t * t / 4.0;
  const double env = std::exp(-0.5 * lam * t);
  if (std::abs(u2) < 1e-3) {
    const double c = 1.0 + u2 / 2.0 + u2 * u2 / 24.0 + u2 * u2 * u2 / 720.0;
    const double s = 0.5 * t * (1.0 + u2 / 6.0 + u2 * u2 / 120.0 + u2 * u2 * u2 / 5040.0);
    return {env * c, env * s};
  }
  if (disc > 0.0) {
    const double d = std::sqrt(disc);
    const double grow = std::exp(0.5 * (d - lam) * t);
    const double decay = std::exp(-0.5 * (d + lam) * t);
    return {0.5 * (grow + decay), 0.5 * (grow - decay) / d};
  }
  const double w = std::sqrt(-disc);
  return {env * std::cos(0.5 * w * t), env * std::sin(0.5 * w * t) / w};
}

}  // namespace detail

/// Excited-state amplitude G(t) = e^{-lambda t/2}[cosh(dt/2) + (lambda/d) sinh(dt/2)].
inline double amplitude_damping_g(const AmplitudeDampingModel& m, double t) {
  const auto p = detail::damping_parts(m, t);
  return p.c + m.lambda * p.s;
}

/// dG/dt = -gamma0 lambda e^{-lambda t/2} sinh(dt/2)/d
inline double amplitude_damping_g_dot(const AmplitudeDampingModel& m, double t) {
  return -m.gamma0 * m.lambda * detail::damping_parts(m, t).s;
}

/// Time-local decay rate gamma(t) = -2 dG/dt / G (diverges at zeros of G).
inline double amplitude_damping_rate(const AmplitudeDampingModel& m, double t) {
  return -2.0 * amplitude_damping_g_dot(m, t) / amplitude_damping_g(m, t);
}

/// First zero of G(t); empty on the non-oscillatory branch gamma0 <= lambda/2.
inline std::optional<double> amplitude_damping_first_zero(const AmplitudeDampingModel& m) {
  const double disc = m.lambda * m.lambda - 2.0 * m.gamma0 * m.lambda;
  if (disc >= 0.0) return std::nullopt;
  const double w = std::sqrt(-disc);
  return 2.0 * (std::numbers::pi - std::atan(w / m.lambda)) / w;
}

/// Map scaling the coherence rho_10 by c and the excited population by p,
/// moving the lost population to the ground state.
inline SuperOperator amplitude_damping_map(Complex coherence, double excited_scale) {
  Mat4 m = Mat4::Zero();
  m(0, 0) = 1.0;
  m(1, 1) = coherence;
  m(2, 2) = std::conj(coherence);
  m(3, 3) = excited_scale;
  m(0, 3) = 1.0 - excited_scale;
  return SuperOperator(m);
}

inline SuperOperator amplitude_damping_propagator(const AmplitudeDampingModel& m, double t) {
  if (t < 0.0) throw InvalidArgument("time must be non-negative");
  const double g = amplitude_damping_g(m, t);
  return amplitude_damping_map(g, g * g);
}

// ---------------------------------------------------------------------------
// Composite two-qubit models
// ---------------------------------------------------------------------------

/// Target qubit coupled through H = J/2 [|1><1| (x) sigma_x + |0><0| (x) I] to a
/// control qubit in a|1><1| + (1-a)|0><0|, with isotropic depolarizing noise
/// gamma on the target. Factor order: control (x) target.
struct CnotControlModel {
  double J = 1.0;
  double gamma = 0.0;
  double a = 0.0;

  void validate() const {
    if (!std::isfinite(J)) throw InvalidArgument("J must be finite");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be >= 0");
    if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument("control population a must lie in [0, 1]");
  }

  DensityMatrix environment_state() const { return DensityMatrix::diagonal(a); }
  static constexpr Subsystem kEnvironment = Subsystem::First;

  friend bool operator==(const CnotControlModel&, const CnotControlModel&) = default;
};

/// Two atoms in a common reservoir with cross-decay gamma0 sin(x)/x, x = qd.
/// The system atom is the first factor; the environment atom starts in
/// a|e><e| + (1-a)|g><g|.
struct SuperradianceModel {
  double gamma0 = 1.0;
  double x = std::numbers::pi;
  double a = 0.0;

  void validate() const {
    if (!(gamma0 >= 0.0) || !std::isfinite(gamma0)) throw InvalidArgument("gamma0 must be >= 0");
    if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument("separation x must be > 0");
    if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument("environment population a must lie in [0, 1]");
  }

  double cross_rate() const { return gamma0 * std::sin(x) / x; }
  DensityMatrix environment_state() const { return DensityMatrix::diagonal(a); }
  static constexpr Subsystem kEnvironment = Subsystem::Second;

  friend bool operator==(const SuperradianceModel&, const SuperradianceModel&) = default;
};

inline JointGenerator joint_generator(const CnotControlModel& m) {
  m.validate();
  const Mat2 p0 = (pauli::identity() + pauli::z()) / 2.0;
  const Mat2 p1 = (pauli::identity() - pauli::z()) / 2.0;
  const Mat4 h = 0.5 * m.J * (kron(p1, pauli::x()) + kron(p0, pauli::identity()));
  JointGenerator gen;
  gen.matrix = lindblad::hamiltonian<4>(h);
  if (m.gamma != 0.0) {
    for (int j = 1; j <= 3; ++j) {
      const Mat4 s = kron(pauli::identity(), pauli::by_index(j));
      gen.matrix += 0.5 * m.gamma * (kron(Mat4(s.conjugate()), s) - Mat16::Identity());
    }
  }
  return gen;
}

inline JointGenerator joint_generator(const SuperradianceModel& m) {
  m.validate();
  const std::array<Mat4, 2> lower{kron(pauli::lower(), pauli::identity()), kron(pauli::identity(), pauli::lower())};
  const double cross = m.cross_rate();
  JointGenerator gen;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double rate = i == j ? m.gamma0 : cross;
      if (rate == 0.0) continue;
      gen.matrix += rate * lindblad::dissipator<4>(lower[j], lower[i]);
    }
  return gen;
}

}  // namespace kdivis
