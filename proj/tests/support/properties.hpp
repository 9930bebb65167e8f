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

// Property suites shared by the unit tests and the acceptance runner. Each
// returns ok plus a short description of the first counterexample.

#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "kdivis/kdivis.hpp"
#include "support/oracles.hpp"

namespace kdivis::testing {

struct PropertyResult {
  bool ok = true;
  std::string detail;
};

inline PropertyResult fail(const std::string& what) { return {false, what}; }

/// choi_of agrees with the definition and superop_of_choi inverts it.
inline PropertyResult choi_round_trip(int n_maps = 100, unsigned seed = 1) {
  Rng rng(seed);
  for (int k = 0; k < n_maps; ++k) {
    const SuperOperator e = k % 2 == 0 ? random_cptp(rng) : random_affine_map(rng);
    const ChoiMatrix c = choi_of(e);
    const double def_err = (c.matrix() - brute_choi(e)).cwiseAbs().maxCoeff();
    const double trip_err = (superop_of_choi(c).matrix() - e.matrix()).cwiseAbs().maxCoeff();
    if (def_err > 1e-12 || trip_err > 1e-12) {
      std::ostringstream s;
      s << "map " << k << ": definition error " << def_err << ", round-trip error " << trip_err;
      return fail(s.str());
    }
    if (std::abs(c.trace() - 1.0) > 1e-12) return fail("trace-preserving map with Choi trace != 1");
  }
  return {};
}

/// Every CP map passes the positivity test; every map failing positivity
/// also fails complete positivity.
inline PropertyResult cp_implies_p(int n_maps = 200, unsigned seed = 2) {
  Rng rng(seed);
  constexpr double tol = 1e-10;
  for (int k = 0; k < n_maps; ++k) {
    const SuperOperator e = random_cptp(rng);
    if (!is_cp(e, tol).holds) return fail("random CPTP map " + std::to_string(k) + " failed the CP test");
    if (!is_positive(e, tol).holds) return fail("CP map " + std::to_string(k) + " failed the P test");
  }
  for (int k = 0; k < n_maps; ++k) {
    const SuperOperator e = random_affine_map(rng);
    const bool p = is_positive(e, tol).holds;
    const bool cp = is_cp(e, tol).holds;
    if (cp && !p) return fail("affine map " + std::to_string(k) + " is CP but not P");
  }
  return {};
}

/// The Pauli-diagonal criterion |mu_j| <= 1 and its witness agree with the
/// general sphere search.
inline PropertyResult pauli_fast_path_matches_general(int n_maps = 200, unsigned seed = 3) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  constexpr double tol = 1e-10;
  for (int k = 0; k < n_maps; ++k) {
    const std::array<double, 3> mu{u(rng), u(rng), u(rng)};
    const SuperOperator e = SuperOperator::pauli_diagonal(mu);
    const PositivityWitness general = is_positive(e, tol);
    const double fast = pauli_diagonal_positivity_witness(mu);
    if (std::abs(general.witness - fast) > 1e-9) {
      std::ostringstream s;
      s << "map " << k << ": general witness " << general.witness << " vs closed form " << fast;
      return fail(s.str());
    }
    if (general.holds != is_positive_pauli_diagonal(mu, 2.0 * tol) && std::abs(fast) > 1e-8)
      return fail("map " + std::to_string(k) + ": verdicts differ");
  }
  return {};
}

/// For P-divisible processes the trace distance never increases: every BLP
/// rate sigma is <= 1e-6.
inline PropertyResult p_divisible_has_no_blp_increase() {
  RunSettings run;
  run.horizon = 10.0;
  run.n_steps = 500;
  std::vector<std::pair<std::string, ModelSpec>> models{
      {"hall", PauliChannelModel::hall()},
      {"sine", PauliChannelModel::eternal_sine()},
      {"pauli (1, 1, -0.4)", PauliChannelModel::constant(1.0, 1.0, -0.4)},
      {"pauli (0.3, -0.2, 0.5)", PauliChannelModel::constant(0.3, -0.2, 0.5)},
      {"pauli (0.2, 0.7, 0.1)", PauliChannelModel::constant(0.2, 0.7, 0.1)},
      {"ad (0.2, 1)", AmplitudeDampingModel{0.2, 1.0}},
      {"ad (0.45, 1)", AmplitudeDampingModel{0.45, 1.0}},
      {"cnot (1, 0.3, 0.2)", CnotControlModel{1.0, 0.3, 0.2}},
      {"cnot (1, 0.1, 0)", CnotControlModel{1.0, 0.1, 0.0}},
      {"superradiance (1, pi, 0.5)", SuperradianceModel{1.0, std::numbers::pi, 0.5}},
      {"superradiance (1, 2, 0)", SuperradianceModel{1.0, 2.0, 0.0}},
  };
  for (const auto& [name, model] : models) {
    const DivisibilityVerdict v = classify(model, run);
    if (v.cls == DivisibilityClass::PD0) return fail(name + " is not P-divisible");
    const BlpResult b = blp_measure(model, run);
    for (const auto& pair : b.sigma)
      for (double s : pair)
        if (s > 1e-6) return fail(name + ": sigma = " + std::to_string(s));
  }
  return {};
}

inline GridSpec small_cnot_grid() {
  GridSpec g;
  g.family = "cnot";
  g.x = {"gamma", 0.0, 1.0, 9};
  g.y = {"a", 0.0, 1.0, 7};
  g.fixed_params = {{"J", 1.0}};
  g.run.horizon = 6.0;
  g.run.n_steps = 120;
  return g;
}

/// Identical CSV bytes for every worker count.
inline PropertyResult sweep_is_deterministic() {
  const GridSpec g = small_cnot_grid();
  const std::string reference = encode_csv(run_sweep(g, true, 1));
  for (unsigned jobs : {2u, 3u, 5u, 8u}) {
    if (encode_csv(run_sweep(g, true, jobs)) != reference)
      return fail("CSV differs with " + std::to_string(jobs) + " workers");
  }
  return {};
}

/// parse_csv recovers every field, and re-encoding the parsed rows
/// reproduces the text byte for byte.
inline PropertyResult csv_round_trip() {
  const PhaseDiagramGrid grid = run_sweep(small_cnot_grid(), true, 1);
  const std::string text = encode_csv(grid);
  const std::vector<CsvRow> rows = parse_csv(text);
  if (rows.size() != grid.cells.size()) return fail("row count differs");
  std::string again(kCsvHeader);
  again += '\n';
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const CsvRow& r = rows[k];
    const GridCell& c = grid.cells[k];
    if (r.cls != c.cls || r.near_boundary != c.near_boundary || r.singular_count != c.singular_count)
      return fail("row " + std::to_string(k) + " differs");
    auto close = [](double a, double b) {
      return (std::isnan(a) && std::isnan(b)) || std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(b));
    };
    if (!close(r.x, c.x) || !close(r.y, c.y) || !close(r.blp, c.blp) || !close(r.rhp, c.rhp))
      return fail("row " + std::to_string(k) + " values differ");
    again += format_number(r.x) + ',' + format_number(r.y) + ',' + class_label(r.cls) + ',' +
             (r.near_boundary ? "1" : "0") + ',' + format_number(r.blp) + ',' + format_number(r.rhp) + ',' +
             std::to_string(r.singular_count) + '\n';
  }
  if (again != text) return fail("re-encoded CSV differs");
  return {};
}

}  // namespace kdivis::testing
