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

// k-positivity tests for qubit maps (k = 1: positivity, k = 2: complete
// positivity) and classification of a process into PD0 / PD1 / PD2.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kdivis/process.hpp"

namespace kdivis {

/// Proper k-divisibility class of a qubit process, ordered PD0 < PD1 < PD2.
/// PD2: CP-divisible. PD1: P-divisible but not CP-divisible. PD0: not P-divisible.
enum class DivisibilityClass { PD0 = 0, PD1 = 1, PD2 = 2 };

inline std::string to_string(DivisibilityClass c) {
  switch (c) {
    case DivisibilityClass::PD0: return "PD0";
    case DivisibilityClass::PD1: return "PD1";
    case DivisibilityClass::PD2: return "PD2";
  }
  return "?";
}

inline std::optional<DivisibilityClass> parse_class(std::string_view s) {
  if (s == "PD0") return DivisibilityClass::PD0;
  if (s == "PD1") return DivisibilityClass::PD1;
  if (s == "PD2") return DivisibilityClass::PD2;
  return std::nullopt;
}

struct PositivityWitness {
  bool holds = true;
  /// Smallest eigenvalue found (Choi spectrum or output spectrum).
  double witness = 0.0;
};

/// Complete positivity through the Choi matrix: holds iff its smallest
/// eigenvalue is >= -tol.
inline PositivityWitness is_cp(const SuperOperator& map, double tol) {
  const double w = min_eigenvalue<4>(choi_of(map).matrix());
  return {w >= -tol, w};
}

/// Deterministic, roughly uniform directions on the unit sphere.
inline std::vector<Eigen::Vector3d> fibonacci_sphere(int n) {
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(n);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    pts.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return pts;
}

namespace detail {

// Output of a Hermiticity-preserving map on the pure state with Bloch vector n:
// L(rho_n) = [(b0 + m0.n) I + (b + M n).sigma] / 2.
struct PureStateResponse {
  double b0;
  Eigen::Vector3d m0;
  Eigen::Vector3d b;
  Eigen::Matrix3d m;

  explicit PureStateResponse(const SuperOperator& map) {
    auto components = [&](const Mat2& x, double& c0, Eigen::Vector3d& c) {
      c0 = 0.5 * x.trace().real();
      for (int k = 1; k <= 3; ++k) c(k - 1) = 0.5 * (pauli::by_index(k) * x).trace().real();
    };
    components(apply_map(map, pauli::identity()), b0, b);
    for (int j = 1; j <= 3; ++j) {
      double c0 = 0.0;
      Eigen::Vector3d c;
      components(apply_map(map, pauli::by_index(j)), c0, c);
      m0(j - 1) = c0;
      m.col(j - 1) = c;
    }
  }

  double min_eigenvalue(const Eigen::Vector3d& n) const { return 0.5 * (b0 + m0.dot(n) - (b + m * n).norm()); }

  double at(double theta, double phi) const {
    return min_eigenvalue(
        Eigen::Vector3d(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)));
  }
};

}  // namespace detail

/// Positivity of a Hermiticity-preserving qubit map: the smallest output
/// eigenvalue over pure inputs is searched on a Fibonacci sphere of `n_dirs`
/// directions; the `refine` best samples are polished by coordinate descent
/// on (theta, phi) down to a step of 1e-10. Pure inputs suffice because the
/// output spectrum is concave in the input state.
///
/// With `settle_below` set, refinement is skipped once a sample is already
/// below it; the witness is then only an upper bound of the true minimum.
inline PositivityWitness is_positive(const SuperOperator& map, double tol, int n_dirs = 128, int refine = 8,
                                     std::optional<double> settle_below = std::nullopt) {
  if (n_dirs < 1) throw InvalidArgument("n_dirs must be >= 1");
  const detail::PureStateResponse resp(map);

  struct Candidate {
    double value;
    double theta;
    double phi;
  };
  std::vector<Candidate> cands;
  cands.reserve(n_dirs);
  for (const auto& p : fibonacci_sphere(n_dirs)) {
    cands.push_back({resp.min_eigenvalue(p), std::acos(std::clamp(p.z(), -1.0, 1.0)), std::atan2(p.y(), p.x())});
  }
  const int n_refine = std::min<int>(refine, static_cast<int>(cands.size()));
  std::partial_sort(cands.begin(), cands.begin() + n_refine, cands.end(),
                    [](const Candidate& a, const Candidate& b) { return a.value < b.value; });

  double best = cands.front().value;
  if (settle_below && best < *settle_below) return {best >= -tol, best};
  const double initial_step = std::sqrt(4.0 * std::numbers::pi / n_dirs);
  for (int c = 0; c < n_refine; ++c) {
    double theta = cands[c].theta;
    double phi = cands[c].phi;
    double value = cands[c].value;
    double step = initial_step;
    for (int iter = 0; iter < 10000 && step > 1e-10; ++iter) {
      bool moved = false;
      for (const auto& [dt, dp] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}) {
        const double v = resp.at(theta + dt * step, phi + dp * step);
        if (v < value) {
          value = v;
          theta += dt * step;
          phi += dp * step;
          moved = true;
          break;
        }
      }
      if (!moved) step *= 0.5;
    }
    best = std::min(best, value);
  }
  return {best >= -tol, best};
}

/// Positivity of the unital Pauli-diagonal map with Bloch eigenvalues mu.
inline bool is_positive_pauli_diagonal(const std::array<double, 3>& mu, double tol) {
  return std::all_of(mu.begin(), mu.end(), [tol](double m) { return std::abs(m) <= 1.0 + tol; });
}

/// Smallest output eigenvalue of a Pauli-diagonal map over pure inputs.
inline double pauli_diagonal_positivity_witness(const std::array<double, 3>& mu) {
  double largest = 0.0;
  for (double m : mu) largest = std::max(largest, std::abs(m));
  return 0.5 * (1.0 - largest);
}

/// Region membership for constant Pauli rates: all rates >= 0 gives PD2,
/// all pairwise sums >= 0 gives PD1, anything else PD0.
inline DivisibilityClass pauli_constant_class(const std::array<double, 3>& g) {
  if (g[0] >= 0.0 && g[1] >= 0.0 && g[2] >= 0.0) return DivisibilityClass::PD2;
  if (g[0] + g[1] >= 0.0 && g[1] + g[2] >= 0.0 && g[2] + g[0] >= 0.0) return DivisibilityClass::PD1;
  return DivisibilityClass::PD0;
}

struct DivisibilityVerdict {
  DivisibilityClass cls = DivisibilityClass::PD2;
  /// Most negative complement-Choi eigenvalue over the horizon.
  double worst_cp_violation = 0.0;
  /// Most negative output eigenvalue found over states and the steps that
  /// were tested for positivity (only CP-violating steps need the test). 0
  /// when no step was tested. Decisive violations are not refined, so the
  /// value can sit above the true minimum.
  double worst_p_violation = 0.0;
  std::vector<double> singular_times;
  /// Decisive violation within a factor of 10 of the tolerance.
  bool near_boundary = false;
  double tolerance = 0.0;
  int steps_evaluated = 0;
};

/// Per-step diagnostics shared by the classifier and the RHP measure.
struct StepDiagnostics {
  double t = 0.0;
  double epsilon = 0.0;
  double choi_min = 0.0;
  /// Trace norm and trace of the complement's Choi matrix.
  double choi_trace_norm = 1.0;
  double choi_trace = 1.0;
  std::optional<double> p_witness;
};

struct StepAnalysis {
  std::vector<StepDiagnostics> steps;
  std::vector<double> singular_times;
};

inline StepAnalysis analyze_steps(const ProcessSamples& samples, const RunSettings& settings) {
  const double tol = settings.effective_tolerance();
  StepAnalysis out;
  out.steps.reserve(samples.steps.size());
  for (std::size_t i = 0; i < samples.steps.size(); ++i) {
    const auto& step = samples.steps[i];
    if (!step) {
      out.singular_times.push_back(samples.times[i]);
      continue;
    }
    const Mat4 c = choi_of(step->lambda_map).matrix();
    const Mat4 herm = 0.5 * (c + c.adjoint());
    const Eigen::Vector4d ev = hermitian_eigenvalues<4>(herm);
    StepDiagnostics d;
    d.t = step->t;
    d.epsilon = step->epsilon;
    d.choi_min = ev(0);
    d.choi_trace_norm = ev.cwiseAbs().sum();
    d.choi_trace = ev.sum();
    if (d.choi_min < -tol) {
      if (settings.positivity == PositivityMethod::Auto && step->pauli_mu) {
        d.p_witness = pauli_diagonal_positivity_witness(*step->pauli_mu);
      } else {
        // A sample already past the near-boundary band settles the step.
        d.p_witness = is_positive(step->lambda_map, tol, settings.positivity_directions, settings.positivity_refine,
                                  -10.0 * tol)
                          .witness;
      }
    }
    out.steps.push_back(d);
  }
  return out;
}

inline DivisibilityVerdict verdict_from(const StepAnalysis& analysis, double tol) {
  if (analysis.steps.empty()) throw AllStepsSingular("every complement step hit a singular propagator");
  DivisibilityVerdict v;
  v.tolerance = tol;
  v.singular_times = analysis.singular_times;
  v.steps_evaluated = static_cast<int>(analysis.steps.size());
  v.worst_cp_violation = std::numeric_limits<double>::infinity();
  bool p_tested = false;
  double worst_p = std::numeric_limits<double>::infinity();
  for (const auto& s : analysis.steps) {
    v.worst_cp_violation = std::min(v.worst_cp_violation, s.choi_min);
    if (s.p_witness) {
      p_tested = true;
      worst_p = std::min(worst_p, *s.p_witness);
    }
  }
  v.worst_p_violation = p_tested ? worst_p : 0.0;
  if (v.worst_cp_violation >= -tol) {
    v.cls = DivisibilityClass::PD2;
  } else if (v.worst_p_violation >= -tol) {
    v.cls = DivisibilityClass::PD1;
  } else {
    v.cls = DivisibilityClass::PD0;
  }
  auto near = [tol](double w) { return w <= -0.1 * tol && w >= -10.0 * tol; };
  v.near_boundary = near(v.worst_cp_violation) || (p_tested && near(v.worst_p_violation));
  return v;
}

/// Classify a process over [0, horizon]: PD2 if no complement step violates
/// complete positivity beyond the tolerance, else PD1 if none violates
/// positivity, else PD0. Singular steps are skipped and reported.
inline DivisibilityVerdict classify(const ModelSpec& model, const RunSettings& settings = {}) {
  const ProcessSamples samples = sample_process(model, settings);
  return verdict_from(analyze_steps(samples, settings), settings.effective_tolerance());
}

inline DivisibilityVerdict classify(const ModelSpec& model, double horizon, int n_steps, double epsilon, double tol) {
  RunSettings s;
  s.horizon = horizon;
  s.n_steps = n_steps;
  s.epsilon = epsilon;
  s.tolerance = tol;
  return classify(model, s);
}

}  // namespace kdivis
