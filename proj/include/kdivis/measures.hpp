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

// Trace-distance (BLP) and Choi trace-norm (RHP) non-Markovianity measures.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "kdivis/divisibility.hpp"

namespace kdivis {

struct BlpResult {
  std::vector<double> times;
  /// Initial Bloch direction n of each antipodal pair (n, -n).
  std::vector<Eigen::Vector3d> directions;
  /// sigma[p][i] = (D_p(t_{i+1}) - D_p(t_i)) / (t_{i+1} - t_i).
  std::vector<std::vector<double>> sigma;
  /// Largest sum of positive trace-distance increments over the pairs.
  double measure = 0.0;
  std::size_t best_pair = 0;
  std::pair<Eigen::Vector3d, Eigen::Vector3d> argmax_pair{Eigen::Vector3d::UnitZ(), -Eigen::Vector3d::UnitZ()};
};

struct RhpResult {
  std::vector<double> times;
  std::vector<double> g_series;
  /// Trapezoidal integral of g over the non-singular steps.
  double measure = 0.0;
  std::vector<double> singular_times;
};

/// BLP measure restricted to antipodal pure pairs. The measure is a lower
/// bound of the optimum over all state pairs.
inline BlpResult blp_from_samples(const ProcessSamples& samples, int n_pairs) {
  if (n_pairs < 1) throw InvalidArgument("n_pairs must be >= 1");
  BlpResult out;
  out.times = samples.times;
  out.directions = fibonacci_sphere(n_pairs);
  const std::size_t nt = samples.times.size();

  // D_p(t) = ||E_t(n_p . sigma)||_1 / 2, using E_t(n . sigma) = sum_j n_j E_t(sigma_j).
  // Each image is stored through the Hermitian-part coordinates (trace,
  // half diagonal difference, off-diagonal) that fix its 2x2 spectrum.
  std::vector<std::vector<double>> distance(n_pairs, std::vector<double>(nt));
  for (std::size_t i = 0; i < nt; ++i) {
    const auto& e = samples.propagators[i];
    std::array<double, 3> tr{};
    std::array<double, 3> half_diff{};
    std::array<Complex, 3> off{};
    for (int j = 0; j < 3; ++j) {
      const Mat2 img = apply_map(e, pauli::by_index(j + 1));
      tr[j] = (img(0, 0) + img(1, 1)).real();
      half_diff[j] = 0.5 * (img(0, 0) - img(1, 1)).real();
      off[j] = 0.5 * (img(1, 0) + std::conj(img(0, 1)));
    }
    for (int p = 0; p < n_pairs; ++p) {
      const auto& n = out.directions[p];
      const double mean = 0.5 * (n(0) * tr[0] + n(1) * tr[1] + n(2) * tr[2]);
      const double rad = std::hypot(n(0) * half_diff[0] + n(1) * half_diff[1] + n(2) * half_diff[2],
                                    std::abs(n(0) * off[0] + n(1) * off[1] + n(2) * off[2]));
      distance[p][i] = 0.5 * (std::abs(mean - rad) + std::abs(mean + rad));
    }
  }

  out.sigma.assign(n_pairs, std::vector<double>(nt > 0 ? nt - 1 : 0));
  double best = -1.0;
  for (int p = 0; p < n_pairs; ++p) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < nt; ++i) {
      const double inc = distance[p][i + 1] - distance[p][i];
      out.sigma[p][i] = inc / (samples.times[i + 1] - samples.times[i]);
      total += std::max(0.0, inc);
    }
    if (total > best) {
      best = total;
      out.best_pair = p;
    }
  }
  out.measure = std::max(0.0, best);
  out.argmax_pair = {out.directions[out.best_pair], -out.directions[out.best_pair]};
  return out;
}

inline BlpResult blp_measure(const ModelSpec& model, const RunSettings& settings) {
  return blp_from_samples(sample_process(model, settings), settings.blp_pairs);
}

inline BlpResult blp_measure(const ModelSpec& model, double horizon, int n_steps, int n_pairs) {
  RunSettings s;
  s.horizon = horizon;
  s.n_steps = n_steps;
  s.blp_pairs = n_pairs;
  return blp_measure(model, s);
}

namespace detail {

// ||C||_1 - Tr C equals ||C||_1 - 1 for a trace-preserving map; subtracting
// the computed trace keeps the trace drift of an inverted propagator out of g.
inline double rhp_rate(double choi_trace_norm, double choi_trace, double epsilon) {
  const double excess = choi_trace_norm - choi_trace;
  return excess < 1e-12 ? 0.0 : excess / epsilon;
}

}  // namespace detail

/// g = (||C||_1 - Tr C) / eps for the Choi matrix C of the complement (trace 1
/// when the complement is trace preserving), clamped to 0 below 1e-12.
inline double rhp_g(const ComplementStep& step) {
  if (!(step.epsilon > 0.0)) throw InvalidArgument("complement step needs epsilon > 0");
  const Mat4 c = choi_of(step.lambda_map).matrix();
  return detail::rhp_rate(trace_norm(c), c.trace().real(), step.epsilon);
}

inline RhpResult rhp_from_analysis(const StepAnalysis& analysis) {
  if (analysis.steps.empty()) throw AllStepsSingular("every complement step hit a singular propagator");
  RhpResult out;
  out.singular_times = analysis.singular_times;
  for (const auto& s : analysis.steps) {
    out.times.push_back(s.t);
    out.g_series.push_back(detail::rhp_rate(s.choi_trace_norm, s.choi_trace, s.epsilon));
  }
  if (out.times.size() == 1) {
    out.measure = out.g_series[0] * analysis.steps[0].epsilon;
    return out;
  }
  for (std::size_t i = 0; i + 1 < out.times.size(); ++i)
    out.measure += 0.5 * (out.g_series[i] + out.g_series[i + 1]) * (out.times[i + 1] - out.times[i]);
  return out;
}

inline RhpResult rhp_measure(const ModelSpec& model, const RunSettings& settings) {
  RunSettings s = settings;
  // The positivity search is not needed for the measure.
  s.tolerance = std::numeric_limits<double>::max();
  return rhp_from_analysis(analyze_steps(sample_process(model, s), s));
}

inline RhpResult rhp_measure(const ModelSpec& model, double horizon, int n_steps, double epsilon) {
  RunSettings s;
  s.horizon = horizon;
  s.n_steps = n_steps;
  s.epsilon = epsilon;
  return rhp_measure(model, s);
}

inline bool blp_detects(const BlpResult& r, double threshold) { return r.measure > threshold; }
inline bool rhp_detects(const RhpResult& r, double threshold) { return r.measure > threshold; }

inline bool blp_detects(const ModelSpec& model, const RunSettings& settings = {}) {
  return blp_detects(blp_measure(model, settings), settings.blp_threshold);
}

inline bool rhp_detects(const ModelSpec& model, const RunSettings& settings = {}) {
  return rhp_detects(rhp_measure(model, settings), settings.rhp_threshold);
}

/// Verdict and, optionally, both measures from a single sampling pass.
struct ProcessAnalysis {
  DivisibilityVerdict verdict;
  std::optional<BlpResult> blp;
  std::optional<RhpResult> rhp;
};

inline ProcessAnalysis analyze(const ModelSpec& model, const RunSettings& settings, bool with_measures) {
  const ProcessSamples samples = sample_process(model, settings);
  const StepAnalysis steps = analyze_steps(samples, settings);
  ProcessAnalysis out{verdict_from(steps, settings.effective_tolerance()), std::nullopt, std::nullopt};
  if (with_measures) {
    out.blp = blp_from_samples(samples, settings.blp_pairs);
    out.rhp = rhp_from_analysis(steps);
  }
  return out;
}

}  // namespace kdivis
