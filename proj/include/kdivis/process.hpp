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

// Sampling a model on a time grid: propagators E_{t_i} and complement maps
// Lambda_{t_i + eps, t_i}, shared by the classifier and both measures.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kdivis/integrate.hpp"

namespace kdivis {

using ModelSpec = std::variant<PauliChannelModel, AmplitudeDampingModel, CnotControlModel, SuperradianceModel>;

inline std::string family_name(const ModelSpec& model) {
  struct {
    std::string operator()(const PauliChannelModel&) const { return "pauli"; }
    std::string operator()(const AmplitudeDampingModel&) const { return "ad"; }
    std::string operator()(const CnotControlModel&) const { return "cnot"; }
    std::string operator()(const SuperradianceModel&) const { return "superradiance"; }
  } visitor;
  return std::visit(visitor, model);
}

enum class PositivityMethod {
  /// Pauli-diagonal fast path where the complement is known to be Pauli-diagonal.
  Auto,
  /// Sphere search on every model.
  General,
};

/// RK4 resolution for propagators without a closed form.
inline constexpr int kDefaultRk4StepsPerUnit = 400;

/// Time grid, tolerances and search parameters shared by classify, the
/// measures and the sweep engine.
struct RunSettings {
  double horizon = 10.0;
  int n_steps = 500;
  /// Complement step; 0 selects horizon / n_steps.
  double epsilon = 0.0;
  /// Violation tolerance per step; 0 selects 1e-7 * epsilon.
  double tolerance = 0.0;
  int rk4_steps_per_unit = kDefaultRk4StepsPerUnit;
  bool check_integration = false;
  double max_condition = kDefaultTolerances.max_condition;
  PositivityMethod positivity = PositivityMethod::Auto;
  int positivity_directions = 128;
  /// Number of best sphere samples refined by coordinate descent.
  int positivity_refine = 8;
  int blp_pairs = 64;
  double blp_threshold = 1e-5;
  double rhp_threshold = 1e-5;

  double grid_step() const { return horizon / n_steps; }
  double effective_epsilon() const { return epsilon > 0.0 ? epsilon : grid_step(); }
  double effective_tolerance() const { return tolerance > 0.0 ? tolerance : 1e-7 * effective_epsilon(); }

  void validate() const {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidArgument("horizon must be > 0");
    if (n_steps < 2) throw InvalidArgument("n_steps must be >= 2");
    if (epsilon < 0.0 || effective_epsilon() > grid_step() * (1.0 + 1e-12))
      throw InvalidArgument("epsilon must lie in (0, horizon / n_steps]");
    if (tolerance < 0.0) throw InvalidArgument("tolerance must be >= 0");
    if (rk4_steps_per_unit < 1) throw InvalidArgument("rk4_steps_per_unit must be >= 1");
    if (!(max_condition > 1.0)) throw InvalidArgument("max_condition must be > 1");
    if (positivity_directions < 1 || positivity_refine < 0) throw InvalidArgument("invalid positivity search size");
    if (blp_pairs < 1) throw InvalidArgument("blp_pairs must be >= 1");
    if (!(blp_threshold >= 0.0) || !(rhp_threshold >= 0.0)) throw InvalidArgument("thresholds must be >= 0");
  }
};

/// Lambda_{t + eps, t}: maps E_t onto E_{t + eps}.
struct ComplementStep {
  double t = 0.0;
  double epsilon = 0.0;
  SuperOperator lambda_map;
  /// Bloch eigenvalues when the complement is known to be Pauli-diagonal.
  std::optional<std::array<double, 3>> pauli_mu;
};

/// complement_map(E_t, E_{t+eps}) = E_{t+eps} o E_t^{-1}; SingularMap propagates.
inline ComplementStep complement_map(const SuperOperator& e_t, const SuperOperator& e_te, double t = 0.0,
                                     double epsilon = 0.0, double max_condition = kDefaultTolerances.max_condition) {
  return {t, epsilon, compose(e_te, invert(e_t, max_condition)), std::nullopt};
}

/// A process sampled on t_i = i * horizon / n_steps, i = 0..n_steps.
struct ProcessSamples {
  std::vector<double> times;
  std::vector<SuperOperator> propagators;
  /// One entry per t_0..t_{n_steps-1}; empty where E_{t_i} was singular.
  std::vector<std::optional<ComplementStep>> steps;
};

namespace detail {

inline int rk4_substeps(const RunSettings& s, double dt) {
  return std::max(1, static_cast<int>(std::ceil(s.rk4_steps_per_unit * dt - 1e-9)));
}

inline ProcessSamples sample_pauli(const PauliChannelModel& m, const RunSettings& s) {
  const int n = s.n_steps;
  const double h = s.grid_step();
  const double eps = s.effective_epsilon();
  ProcessSamples out;
  std::array<double, 3> cumulative{0.0, 0.0, 0.0};
  for (int i = 0; i <= n; ++i) {
    const double t = i * h;
    if (i > 0) {
      const auto inc = pauli_integrated_rates(m, (i - 1) * h, t);
      for (int j = 0; j < 3; ++j) cumulative[j] += inc[j];
    }
    out.times.push_back(t);
    out.propagators.push_back(SuperOperator::pauli_diagonal(pauli_bloch_from_integrated(cumulative)));
    if (i == n) break;
    const auto mu = pauli_bloch_from_integrated(pauli_integrated_rates(m, t, t + eps));
    for (double v : mu)
      if (!std::isfinite(v)) throw InvalidArgument("rate functions must be finite on the horizon");
    out.steps.emplace_back(ComplementStep{t, eps, SuperOperator::pauli_diagonal(mu), mu});
  }
  return out;
}

inline ProcessSamples sample_amplitude_damping(const AmplitudeDampingModel& m, const RunSettings& s) {
  m.validate();
  const int n = s.n_steps;
  const double h = s.grid_step();
  const double eps = s.effective_epsilon();
  ProcessSamples out;
  for (int i = 0; i <= n; ++i) {
    const double t = i * h;
    const double g = amplitude_damping_g(m, t);
    out.times.push_back(t);
    out.propagators.push_back(amplitude_damping_map(g, g * g));
    if (i == n) break;
    // The complement of two damping maps is again a damping map with
    // amplitude ratio G(t + eps) / G(t); no matrix inversion is needed.
    const double ratio = amplitude_damping_g(m, t + eps) / g;
    if (g == 0.0 || !std::isfinite(ratio)) {
      out.steps.emplace_back(std::nullopt);
    } else {
      out.steps.emplace_back(ComplementStep{t, eps, amplitude_damping_map(ratio, ratio * ratio), std::nullopt});
    }
  }
  return out;
}

template <typename Composite>
ProcessSamples sample_composite(const Composite& m, const RunSettings& s) {
  m.validate();
  const int n = s.n_steps;
  const double h = s.grid_step();
  const double eps = s.effective_epsilon();
  const bool reuse_next = std::abs(eps - h) <= 1e-12 * h;
  const int sub_h = rk4_substeps(s, h);
  const int sub_eps = rk4_substeps(s, eps);

  const JointGenerator gen = joint_generator(m);
  ReducedDynamics dyn(gen, m.environment_state(), Composite::kEnvironment);
  std::optional<ReducedDynamics> fine;
  if (s.check_integration) fine.emplace(gen, m.environment_state(), Composite::kEnvironment);

  ProcessSamples out;
  out.times.push_back(0.0);
  out.propagators.push_back(dyn.reduced());
  for (int i = 0; i < n; ++i) {
    const double t = i * h;
    const SuperOperator e_t = out.propagators.back();
    SuperOperator e_te;
    if (!reuse_next) {
      ReducedDynamics probe = dyn;
      probe.advance(eps, sub_eps);
      e_te = probe.reduced();
    }
    dyn.advance(h, sub_h);
    const SuperOperator next = dyn.reduced();
    if (fine) {
      fine->advance(h, 2 * sub_h);
      const double diff = (fine->reduced().matrix() - next.matrix()).cwiseAbs().maxCoeff();
      if (diff > kStepHalvingTolerance)
        throw IntegrationUnstable("step halving changed the reduced propagator by " + std::to_string(diff));
    }
    if (reuse_next) e_te = next;
    try {
      out.steps.emplace_back(complement_map(e_t, e_te, t, eps, s.max_condition));
    } catch (const SingularMap&) {
      out.steps.emplace_back(std::nullopt);
    }
    out.times.push_back((i + 1) * h);
    out.propagators.push_back(next);
  }
  return out;
}

}  // namespace detail

/// Propagators and complement steps of `model` on the grid of `settings`.
/// Pauli and amplitude-damping models use closed forms; the composite models
/// are integrated with RK4 and their complements built by inversion.
inline ProcessSamples sample_process(const ModelSpec& model, const RunSettings& settings) {
  settings.validate();
  struct {
    const RunSettings& s;
    ProcessSamples operator()(const PauliChannelModel& m) const { return detail::sample_pauli(m, s); }
    ProcessSamples operator()(const AmplitudeDampingModel& m) const { return detail::sample_amplitude_damping(m, s); }
    ProcessSamples operator()(const CnotControlModel& m) const { return detail::sample_composite(m, s); }
    ProcessSamples operator()(const SuperradianceModel& m) const { return detail::sample_composite(m, s); }
  } visitor{settings};
  return std::visit(visitor, model);
}

/// E_t for a single time.
inline SuperOperator propagator(const ModelSpec& model, double t, int rk4_steps_per_unit = kDefaultRk4StepsPerUnit) {
  if (t < 0.0) throw InvalidArgument("time must be non-negative");
  struct {
    double t;
    int per_unit;
    int steps() const { return std::max(1, static_cast<int>(std::ceil(per_unit * t))); }
    SuperOperator operator()(const PauliChannelModel& m) const { return pauli_propagator_analytic(m, t); }
    SuperOperator operator()(const AmplitudeDampingModel& m) const { return amplitude_damping_propagator(m, t); }
    SuperOperator operator()(const CnotControlModel& m) const {
      return reduced_propagator(joint_generator(m), m.environment_state(), CnotControlModel::kEnvironment, t, steps());
    }
    SuperOperator operator()(const SuperradianceModel& m) const {
      return reduced_propagator(joint_generator(m), m.environment_state(), SuperradianceModel::kEnvironment, t,
                                steps());
    }
  } visitor{t, rk4_steps_per_unit};
  return std::visit(visitor, model);
}

}  // namespace kdivis
