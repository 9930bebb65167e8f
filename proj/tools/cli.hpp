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

// Command-line front end. Exit codes: 0 success, 1 configuration error,
// 2 model error or cell budget exceeded.

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kdivis/config.hpp"
#include "kdivis/encode.hpp"

namespace kdivis::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitModel = 2;

/// Raised when a sweep would exceed the configured cell budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string config_path;
  std::string model;
  std::map<std::string, std::string> rate_flags;
  std::map<std::string, double> param_flags;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<double> horizon;
  std::optional<int> steps;
  std::optional<double> epsilon;
  std::optional<double> tol;
  std::optional<unsigned> jobs;
  std::optional<int> pairs;
  std::optional<double> blp_threshold;
  std::optional<double> rhp_threshold;
  std::optional<std::string> x_axis;
  std::optional<std::string> y_axis;
  std::optional<std::size_t> max_cells;
  bool no_measures = false;
  std::string figure;
};

inline Axis parse_axis(const std::string& text, const std::string& flag) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 4) throw ConfigError(flag + ": expected NAME:MIN:MAX:N");
  Axis a;
  a.name = parts[0];
  try {
    std::size_t u1 = 0, u2 = 0, u3 = 0;
    a.min = std::stod(parts[1], &u1);
    a.max = std::stod(parts[2], &u2);
    a.n = std::stoi(parts[3], &u3);
    if (u1 != parts[1].size() || u2 != parts[2].size() || u3 != parts[3].size()) throw std::invalid_argument(flag);
  } catch (const std::exception&) {
    throw ConfigError(flag + ": expected NAME:MIN:MAX:N");
  }
  return a;
}

/// Apply a positional model name: a family or one of the Pauli presets.
inline void apply_model_name(const std::string& name, ModelConfig& m) {
  if (name.empty()) return;
  if (name == "hall" || name == "sine") {
    const PauliChannelModel p = name == "hall" ? PauliChannelModel::hall() : PauliChannelModel::eternal_sine();
    m = ModelConfig{};
    m.family = "pauli";
    for (int j = 0; j < 3; ++j) m.rates[pauli_rate_names()[j]] = p.rates[j];
    return;
  }
  if (!family_parameters().count(name))
    throw ConfigError("unknown model '" + name + "' (expected hall, sine, pauli, ad, cnot or superradiance)");
  if (m.family != name) m = ModelConfig{};
  m.family = name;
}

/// Build the run from the config file (if any) and the flags, which win.
inline RunConfig build_config(const Options& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) cfg = load_config(o.config_path);
  apply_model_name(o.model, cfg.model);
  const auto& names = family_parameters().at(cfg.model.family);
  for (const auto& [k, v] : o.rate_flags) {
    if (cfg.model.family != "pauli") throw ConfigError("--" + k + " applies to the pauli family only");
    try {
      cfg.model.rates[k] = RateFunction::parse(v);
    } catch (const InvalidArgument& e) {
      throw ConfigError("--" + k + ": " + e.what());
    }
  }
  for (const auto& [k, v] : o.param_flags) {
    if (!names.count(k)) throw ConfigError("--" + k + " does not apply to the " + cfg.model.family + " family");
    cfg.model.params[k] = v;
  }
  if (o.horizon) cfg.run.horizon = *o.horizon;
  if (o.steps) cfg.run.n_steps = *o.steps;
  if (o.epsilon) cfg.run.epsilon = *o.epsilon;
  if (o.tol) cfg.run.tolerance = *o.tol;
  if (o.jobs) cfg.jobs = *o.jobs;
  if (o.pairs) cfg.run.blp_pairs = *o.pairs;
  if (o.blp_threshold) cfg.run.blp_threshold = *o.blp_threshold;
  if (o.rhp_threshold) cfg.run.rhp_threshold = *o.rhp_threshold;
  if (o.out) cfg.output.path = *o.out;
  if (o.format) {
    const auto f = parse_format(*o.format);
    if (!f) throw ConfigError("--format: expected csv, svg or both");
    cfg.output.format = *f;
  }
  if (o.x_axis || o.y_axis || o.no_measures || o.max_cells) {
    if (!cfg.sweep) cfg.sweep = SweepConfig{};
    if (o.x_axis) cfg.sweep->x = parse_axis(*o.x_axis, "--x-axis");
    if (o.y_axis) cfg.sweep->y = parse_axis(*o.y_axis, "--y-axis");
    if (o.no_measures) cfg.sweep->measures = false;
    if (o.max_cells) cfg.sweep->max_cells = *o.max_cells;
  }
  validate(cfg);
  return cfg;
}

inline std::string fmt(double v) { return format_number(v); }

inline void print_verdict(const DivisibilityVerdict& v, std::ostream& out) {
  out << "class: " << to_string(v.cls) << '\n';
  out << "worst_cp_violation: " << fmt(v.worst_cp_violation) << '\n';
  out << "worst_p_violation: " << fmt(v.worst_p_violation) << '\n';
  out << "near_boundary: " << (v.near_boundary ? "yes" : "no") << '\n';
  out << "tolerance: " << fmt(v.tolerance) << '\n';
  out << "steps_evaluated: " << v.steps_evaluated << '\n';
  out << "singular_times:";
  for (double t : v.singular_times) out << ' ' << fmt(t);
  out << '\n';
}

inline std::string series_csv(const std::vector<double>& t, const std::vector<double>& v) {
  std::string s = "t,value\n";
  for (std::size_t i = 0; i < v.size(); ++i) s += fmt(t[i]) + ',' + fmt(v[i]) + '\n';
  return s;
}

inline std::string series_path(const std::string& out) {
  const std::filesystem::path p(out);
  return p.extension() == ".csv" ? out : out + ".csv";
}

inline void check_budget(const GridSpec& g, std::size_t max_cells) {
  if (g.cell_count() > max_cells)
    throw BudgetExceeded("sweep has " + std::to_string(g.cell_count()) + " cells, budget is " +
                         std::to_string(max_cells));
}

inline void summarize(const PhaseDiagramGrid& grid, std::ostream& out) {
  std::map<std::string, int> counts;
  for (const auto& c : grid.cells) ++counts[class_label(c.cls)];
  out << "cells: " << grid.cells.size();
  for (const char* k : {"PD2", "PD1", "PD0", "ERR"}) out << ' ' << k << '=' << counts[k];
  out << '\n';
}

inline std::vector<std::pair<std::filesystem::path, std::string>> render(const PhaseDiagramGrid& grid,
                                                                           const std::string& stem,
                                                                           OutputFormat format) {
  std::vector<std::pair<std::filesystem::path, std::string>> files;
  for (const auto& p : output_paths(stem, format))
    files.emplace_back(p, p.extension() == ".csv" ? encode_csv(grid) : encode_svg(grid));
  return files;
}

inline int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  print_verdict(classify(to_model(cfg.model), cfg.run), out);
  return kExitOk;
}

inline int cmd_blp(const RunConfig& cfg, std::ostream& out) {
  const BlpResult r = blp_measure(to_model(cfg.model), cfg.run);
  out << "blp: " << fmt(r.measure) << '\n';
  out << "detected: " << (blp_detects(r, cfg.run.blp_threshold) ? "yes" : "no") << '\n';
  const auto& n = r.argmax_pair.first;
  out << "best_direction: " << fmt(n(0)) << ' ' << fmt(n(1)) << ' ' << fmt(n(2)) << '\n';
  if (!cfg.output.path.empty()) {
    const std::string path = series_path(cfg.output.path);
    write_atomic(path, series_csv(r.times, r.sigma[r.best_pair]));
    out << "wrote: " << path << '\n';
  }
  return kExitOk;
}

inline int cmd_rhp(const RunConfig& cfg, std::ostream& out) {
  const RhpResult r = rhp_measure(to_model(cfg.model), cfg.run);
  out << "rhp: " << fmt(r.measure) << '\n';
  out << "detected: " << (rhp_detects(r, cfg.run.rhp_threshold) ? "yes" : "no") << '\n';
  out << "singular_times:";
  for (double t : r.singular_times) out << ' ' << fmt(t);
  out << '\n';
  if (!cfg.output.path.empty()) {
    const std::string path = series_path(cfg.output.path);
    write_atomic(path, series_csv(r.times, r.g_series));
    out << "wrote: " << path << '\n';
  }
  return kExitOk;
}

inline int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.sweep) throw ConfigError("sweep needs --x-axis and --y-axis or a sweep section in the config");
  const GridSpec spec = to_grid_spec(cfg);
  check_budget(spec, cfg.sweep->max_cells);
  const PhaseDiagramGrid grid = run_sweep(spec, cfg.sweep->measures, cfg.jobs);
  summarize(grid, out);
  const std::string stem = cfg.output.path.empty() ? "sweep" : cfg.output.path;
  for (const auto& [path, content] : render(grid, stem, cfg.output.format)) {
    write_atomic(path, content);
    out << "wrote: " << path.string() << '\n';
  }
  return kExitOk;
}

/// Smallest distance of constant Pauli rates to the region boundaries.
inline double pauli_boundary_margin(const std::array<double, 3>& g) {
  double m = std::abs(g[0]);
  for (double v : {g[1], g[2], g[0] + g[1], g[1] + g[2], g[2] + g[0]}) m = std::min(m, std::abs(v));
  return m;
}

/// Replace the numeric classes of a constant-rate Pauli grid by the analytic
/// predicates; returns the number of cells away from the boundaries where the
/// two disagree.
inline int apply_pauli_predicates(PhaseDiagramGrid& grid) {
  int mismatches = 0;
  for (int iy = 0; iy < grid.spec.y.n; ++iy)
    for (int ix = 0; ix < grid.spec.x.n; ++ix) {
      auto& cell = grid.cells[static_cast<std::size_t>(iy) * grid.spec.x.n + ix];
      std::map<std::string, double> p = grid.spec.fixed_params;
      p[grid.spec.x.name] = cell.x;
      p[grid.spec.y.name] = cell.y;
      const std::array<double, 3> g{p["g1"], p["g2"], p["g3"]};
      const DivisibilityClass analytic = pauli_constant_class(g);
      if (cell.cls != analytic && pauli_boundary_margin(g) > 1e-9) ++mismatches;
      cell.cls = analytic;
    }
  return mismatches;
}

inline int cmd_figure(const std::string& name, const Options& o, std::ostream& out, std::ostream& err) {
  const std::filesystem::path dir = o.out.value_or(".");
  std::vector<std::pair<std::filesystem::path, std::string>> files;
  for (RunConfig cfg : figure_preset(name)) {
    if (o.jobs) cfg.jobs = *o.jobs;
    if (o.max_cells) cfg.sweep->max_cells = *o.max_cells;
    if (o.horizon) cfg.run.horizon = *o.horizon;
    if (o.steps) cfg.run.n_steps = *o.steps;
    if (o.format) {
      const auto f = parse_format(*o.format);
      if (!f) throw ConfigError("--format: expected csv, svg or both");
      cfg.output.format = *f;
    }
    validate(cfg);
    const GridSpec spec = to_grid_spec(cfg);
    check_budget(spec, cfg.sweep->max_cells);
    PhaseDiagramGrid grid = run_sweep(spec, cfg.sweep->measures, cfg.jobs);
    if (name == "fig1") {
      const int mismatches = apply_pauli_predicates(grid);
      if (mismatches > 0) {
        err << "error: numeric classification disagrees with the analytic regions on " << mismatches
            << " cells\n";
        return kExitModel;
      }
    }
    out << cfg.output.path << ": ";
    summarize(grid, out);
    for (auto& f : render(grid, (dir / cfg.output.path).string(), cfg.output.format)) files.push_back(std::move(f));
  }
  // Everything is computed before the first file is written.
  for (const auto& [path, content] : files) {
    write_atomic(path, content);
    out << "wrote: " << path.string() << '\n';
  }
  return kExitOk;
}

inline void add_model_flags(CLI::App* sub, Options& o) {
  sub->add_option("model", o.model, "hall, sine, pauli, ad, cnot or superradiance");
  for (const char* g : {"g1", "g2", "g3"}) {
    sub->add_option_function<std::string>(
        std::string("--") + g, [&o, g](const std::string& v) { o.rate_flags[g] = v; },
        "Pauli rate: number, const:c, tanh-neg, sin or sin-neg");
  }
  for (const char* p : {"gamma0", "lambda", "J", "gamma", "a", "x"}) {
    sub->add_option_function<double>(
        std::string("--") + p, [&o, p](double v) { o.param_flags[p] = v; }, std::string("model parameter ") + p);
  }
}

inline void add_common_flags(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "JSON run configuration");
  sub->add_option("--out", o.out, "output path");
  sub->add_option("--format", o.format, "csv, svg or both");
  sub->add_option("--horizon", o.horizon, "time horizon");
  sub->add_option("--steps", o.steps, "number of time steps");
  sub->add_option("--epsilon", o.epsilon, "complement step (default horizon / steps)");
  sub->add_option("--tol", o.tol, "violation tolerance (default 1e-7 * epsilon)");
  sub->add_option("--jobs", o.jobs, "worker threads (0: all cores)")->envname("KDIVIS_JOBS");
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"k-divisibility classification of qubit dynamical maps"};
  app.require_subcommand(1);
  Options o;

  auto* classify_cmd = app.add_subcommand("classify", "classify a single model as PD0, PD1 or PD2");
  auto* blp_cmd = app.add_subcommand("blp", "trace-distance (BLP) measure");
  auto* rhp_cmd = app.add_subcommand("rhp", "Choi trace-norm (RHP) measure");
  auto* sweep_cmd = app.add_subcommand("sweep", "two-parameter phase diagram");
  auto* figure_cmd = app.add_subcommand("figure", "regenerate a preset figure (fig1 .. fig4)");
  for (auto* sub : {classify_cmd, blp_cmd, rhp_cmd, sweep_cmd}) {
    add_model_flags(sub, o);
    add_common_flags(sub, o);
  }
  for (auto* sub : {blp_cmd, rhp_cmd, sweep_cmd}) {
    sub->add_option("--blp-threshold", o.blp_threshold, "BLP detection threshold");
    sub->add_option("--rhp-threshold", o.rhp_threshold, "RHP detection threshold");
  }
  blp_cmd->add_option("--pairs", o.pairs, "antipodal state pairs");
  sweep_cmd->add_option("--x-axis", o.x_axis, "NAME:MIN:MAX:N");
  sweep_cmd->add_option("--y-axis", o.y_axis, "NAME:MIN:MAX:N");
  sweep_cmd->add_flag("--no-measures", o.no_measures, "skip the BLP and RHP measures");
  sweep_cmd->add_option("--max-cells", o.max_cells, "cell budget");
  figure_cmd->add_option("name", o.figure, "fig1, fig2, fig3 or fig4")->required();
  figure_cmd->add_option("--out", o.out, "output directory");
  figure_cmd->add_option("--format", o.format, "csv, svg or both");
  figure_cmd->add_option("--horizon", o.horizon, "time horizon");
  figure_cmd->add_option("--steps", o.steps, "number of time steps");
  figure_cmd->add_option("--jobs", o.jobs, "worker threads (0: all cores)")->envname("KDIVIS_JOBS");
  figure_cmd->add_option("--max-cells", o.max_cells, "cell budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (figure_cmd->parsed()) return cmd_figure(o.figure, o, out, err);
    const RunConfig cfg = build_config(o);
    if (classify_cmd->parsed()) return cmd_classify(cfg, out);
    if (blp_cmd->parsed()) return cmd_blp(cfg, out);
    if (rhp_cmd->parsed()) return cmd_rhp(cfg, out);
    return cmd_sweep(cfg, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitModel;
  } catch (const std::exception& e) {
    err << "model error: " << e.what() << '\n';
    return kExitModel;
  }
}

}  // namespace kdivis::cli
