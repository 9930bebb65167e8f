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

// Fixed-step fourth-order Runge-Kutta propagation of dE/dt = L_t E, and the
// reduced single-qubit propagator of a two-qubit generator.

#pragma once

#include <functional>
#include <string>

#include "kdivis/models.hpp"

namespace kdivis {

/// Convergence tolerance of the step-halving check.
inline constexpr double kStepHalvingTolerance = 1e-6;

namespace detail {

template <int N, int Cols>
using Block = Eigen::Matrix<Complex, N, Cols>;

template <int N, int Cols, typename GenFn>
Block<N, Cols> rk4_evolve(const GenFn& gen_fn, Block<N, Cols> state, double t0, double t1, int steps) {
  const double h = (t1 - t0) / steps;
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * h;
    const auto l0 = gen_fn(t).matrix;
    const auto lm = gen_fn(t + 0.5 * h).matrix;
    const auto l1 = gen_fn(t + h).matrix;
    const Block<N, Cols> k1 = l0 * state;
    const Block<N, Cols> k2 = lm * (state + 0.5 * h * k1);
    const Block<N, Cols> k3 = lm * (state + 0.5 * h * k2);
    const Block<N, Cols> k4 = l1 * (state + h * k3);
    state += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  if (!state.allFinite()) throw IntegrationUnstable("RK4 produced non-finite values");
  return state;
}

/// One RK4 step of a constant linear generator: I + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24.
template <int N>
Eigen::Matrix<Complex, N, N> rk4_step_matrix(const Eigen::Matrix<Complex, N, N>& l, double h) {
  using M = Eigen::Matrix<Complex, N, N>;
  const M hl = h * l;
  M term = M::Identity();
  M sum = M::Identity();
  for (int k = 1; k <= 4; ++k) {
    term = (term * hl / static_cast<double>(k)).eval();
    sum += term;
  }
  return sum;
}

}  // namespace detail

using GeneratorFn = std::function<GeneratorAt(double)>;

/// E_t = T exp(int_0^t L_s ds) from E_0 = identity in `steps` RK4 steps. With
/// `check`, the result is recomputed with twice the steps and IntegrationUnstable
/// is thrown when the two differ by more than kStepHalvingTolerance.
inline SuperOperator propagate_rk4(const GeneratorFn& gen_fn, double t, int steps, bool check = false) {
  if (steps < 1) throw InvalidArgument("steps must be >= 1");
  if (t < 0.0) throw InvalidArgument("time must be non-negative");
  const Mat4 e = detail::rk4_evolve<4, 4>(gen_fn, Mat4::Identity(), 0.0, t, steps);
  if (check) {
    const Mat4 fine = detail::rk4_evolve<4, 4>(gen_fn, Mat4::Identity(), 0.0, t, 2 * steps);
    const double diff = (fine - e).cwiseAbs().maxCoeff();
    if (diff > kStepHalvingTolerance)
      throw IntegrationUnstable("step halving changed the propagator by " + std::to_string(diff));
  }
  return SuperOperator(e);
}

/// Joint evolution of rho_S (x) rho_env for the four system basis operators
/// under a constant two-qubit generator. Reading `reduced()` after advancing to
/// time t gives rho_S -> Tr_env[exp(L t)(rho_S (x) rho_env)].
class ReducedDynamics {
 public:
  ReducedDynamics(const JointGenerator& gen, const DensityMatrix& env_state, Subsystem env_factor)
      : gen_(gen.matrix), env_(env_factor) {
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) {
        Mat2 basis = Mat2::Zero();
        basis(i, j) = 1.0;
        const Mat4 joint = env_factor == Subsystem::First ? Mat4(kron(env_state.matrix(), basis))
                                                          : Mat4(kron(basis, env_state.matrix()));
        states_.col(i + 2 * j) = vectorize(joint);
      }
  }

  double time() const { return time_; }

  /// Advance by dt using `steps` RK4 steps (the step operator is cached).
  void advance(double dt, int steps) {
    if (steps < 1) throw InvalidArgument("steps must be >= 1");
    if (dt == 0.0) return;
    if (dt != cached_dt_ || steps != cached_steps_) {
      const Mat16 step = detail::rk4_step_matrix<16>(gen_, dt / steps);
      Mat16 power = Mat16::Identity();
      for (int s = 0; s < steps; ++s) power = (step * power).eval();
      cached_power_ = power;
      cached_dt_ = dt;
      cached_steps_ = steps;
    }
    states_ = (cached_power_ * states_).eval();
    if (!states_.allFinite()) throw IntegrationUnstable("joint evolution produced non-finite values");
    time_ += dt;
  }

  SuperOperator reduced() const {
    Mat4 m;
    for (int k = 0; k < 4; ++k) {
      const Mat4 joint = unvectorize(Vec16(states_.col(k)));
      m.col(k) = vectorize(partial_trace_env(joint, env_));
    }
    return SuperOperator(m);
  }

 private:
  Mat16 gen_;
  Subsystem env_;
  Eigen::Matrix<Complex, 16, 4> states_;
  double time_ = 0.0;
  double cached_dt_ = -1.0;
  int cached_steps_ = 0;
  Mat16 cached_power_;
};

/// rho_S -> Tr_env[exp(L t)(rho_S (x) rho_env)] built by evolving the four
/// system basis operators; `which_env` is the factor traced out.
inline SuperOperator reduced_propagator(const JointGenerator& gen, const DensityMatrix& env_state, Subsystem which_env,
                                        double t, int steps, bool check = false) {
  if (t < 0.0) throw InvalidArgument("time must be non-negative");
  ReducedDynamics dyn(gen, env_state, which_env);
  dyn.advance(t, steps);
  SuperOperator out = dyn.reduced();
  if (check) {
    ReducedDynamics fine(gen, env_state, which_env);
    fine.advance(t, 2 * steps);
    const double diff = (fine.reduced().matrix() - out.matrix()).cwiseAbs().maxCoeff();
    if (diff > kStepHalvingTolerance)
      throw IntegrationUnstable("step halving changed the reduced propagator by " + std::to_string(diff));
  }
  return out;
}

}  // namespace kdivis
