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

// Two-parameter phase-diagram sweeps. Cells are independent; they are split
// into contiguous row-major blocks, one per worker, and written into
// preallocated slots, so the result does not depend on the worker count.

#pragma once

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "kdivis/measures.hpp"

namespace kdivis {

/// Parameter names and defaults of each model family.
inline const std::map<std::string, std::map<std::string, double>>& family_parameters() {
  static const std::map<std::string, std::map<std::string, double>> table{
      {"pauli", {{"g1", 0.0}, {"g2", 0.0}, {"g3", 0.0}}},
      {"ad", {{"gamma0", 1.0}, {"lambda", 1.0}}},
      {"cnot", {{"J", 1.0}, {"gamma", 0.0}, {"a", 0.0}}},
      {"superradiance", {{"gamma0", 1.0}, {"x", std::numbers::pi}, {"a", 0.0}}},
  };
  return table;
}

/// Build a model of `family` from named numeric parameters (missing names
/// take the family defaults; Pauli rates are constants).
inline ModelSpec make_model(const std::string& family, const std::map<std::string, double>& params) {
  const auto& table = family_parameters();
  const auto it = table.find(family);
  if (it == table.end()) throw InvalidArgument("unknown model family '" + family + "'");
  std::map<std::string, double> p = it->second;
  for (const auto& [name, value] : params) {
    if (!p.count(name)) throw InvalidArgument("unknown parameter '" + name + "' for family '" + family + "'");
    p[name] = value;
  }
  if (family == "pauli") return PauliChannelModel::constant(p["g1"], p["g2"], p["g3"]);
  if (family == "ad") {
    AmplitudeDampingModel m{p["gamma0"], p["lambda"]};
    m.validate();
    return m;
  }
  if (family == "cnot") {
    CnotControlModel m{p["J"], p["gamma"], p["a"]};
    m.validate();
    return m;
  }
  SuperradianceModel m{p["gamma0"], p["x"], p["a"]};
  m.validate();
  return m;
}

struct Axis {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  int n = 2;

  double value(int i) const { return i == n - 1 ? max : min + i * (max - min) / (n - 1); }

  friend bool operator==(const Axis&, const Axis&) = default;
};

struct GridSpec {
  std::string family;
  Axis x;
  Axis y;
  std::map<std::string, double> fixed_params;
  RunSettings run;

  std::size_t cell_count() const { return static_cast<std::size_t>(x.n) * static_cast<std::size_t>(y.n); }

  void validate() const {
    const auto& table = family_parameters();
    const auto it = table.find(family);
    if (it == table.end()) throw InvalidArgument("unknown model family '" + family + "'");
    for (const Axis* a : {&x, &y}) {
      if (a->n < 2) throw InvalidArgument("axis '" + a->name + "' needs at least 2 points");
      if (!(a->min < a->max)) throw InvalidArgument("axis '" + a->name + "' needs min < max");
      if (!it->second.count(a->name))
        throw InvalidArgument("unknown parameter '" + a->name + "' for family '" + family + "'");
    }
    if (x.name == y.name) throw InvalidArgument("the two axes must sweep different parameters");
    for (const auto& [name, v] : fixed_params)
      if (!it->second.count(name)) throw InvalidArgument("unknown parameter '" + name + "' for family '" + family + "'");
    run.validate();
  }

  ModelSpec model_at(int ix, int iy) const {
    std::map<std::string, double> p = fixed_params;
    p[x.name] = x.value(ix);
    p[y.name] = y.value(iy);
    return make_model(family, p);
  }
};

struct GridCell {
  double x = 0.0;
  double y = 0.0;
  /// Empty when the cell failed; `error` then holds the reason.
  std::optional<DivisibilityClass> cls;
  bool near_boundary = false;
  double blp = std::numeric_limits<double>::quiet_NaN();
  double rhp = std::numeric_limits<double>::quiet_NaN();
  int singular_count = 0;
  double worst_cp_violation = 0.0;
  double worst_p_violation = 0.0;
  std::string error;
};

struct PhaseDiagramGrid {
  GridSpec spec;
  bool has_measures = false;
  /// Row-major: cells[iy * n_x + ix].
  std::vector<GridCell> cells;

  const GridCell& at(int ix, int iy) const { return cells[static_cast<std::size_t>(iy) * spec.x.n + ix]; }
};

inline GridCell evaluate_cell(const GridSpec& spec, int ix, int iy, bool compute_measures) {
  GridCell cell;
  cell.x = spec.x.value(ix);
  cell.y = spec.y.value(iy);
  try {
    const ProcessAnalysis a = analyze(spec.model_at(ix, iy), spec.run, compute_measures);
    cell.cls = a.verdict.cls;
    cell.near_boundary = a.verdict.near_boundary;
    cell.singular_count = static_cast<int>(a.verdict.singular_times.size());
    cell.worst_cp_violation = a.verdict.worst_cp_violation;
    cell.worst_p_violation = a.verdict.worst_p_violation;
    if (a.blp) cell.blp = a.blp->measure;
    if (a.rhp) cell.rhp = a.rhp->measure;
  } catch (const std::exception& e) {
    cell.cls.reset();
    cell.error = e.what();
  }
  return cell;
}

/// Worker count from `jobs`; 0 selects the hardware concurrency.
inline unsigned resolve_jobs(unsigned jobs) {
  if (jobs > 0) return jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

inline PhaseDiagramGrid run_sweep(const GridSpec& spec, bool compute_measures, unsigned jobs = 0) {
  spec.validate();
  PhaseDiagramGrid grid;
  grid.spec = spec;
  grid.has_measures = compute_measures;
  const std::size_t total = spec.cell_count();
  grid.cells.resize(total);

  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_jobs(jobs), total));
  auto run_block = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const int ix = static_cast<int>(k % spec.x.n);
      const int iy = static_cast<int>(k / spec.x.n);
      grid.cells[k] = evaluate_cell(spec, ix, iy, compute_measures);
    }
  };
  if (workers <= 1) {
    run_block(0, total);
    return grid;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = total / workers;
    const std::size_t extra = total % workers;
    std::size_t begin = 0;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t end = begin + chunk + (w < extra ? 1 : 0);
      pool.emplace_back(run_block, begin, end);
      begin = end;
    }
  }
  return grid;
}

}  // namespace kdivis
