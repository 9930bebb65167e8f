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

// JSON run configuration, figure presets and atomic file output.
//
//   {"model":  {"family": "ad", "gamma0": 0.4, "lambda": 1},
//    "sweep":  {"x": {"param": "gamma0", "min": 0.05, "max": 2, "n": 101},
//               "y": {...}, "measures": true, "max_cells": 20000},
//    "run":    {"horizon": 10, "steps": 500, "epsilon": 0, "tolerance": 0, ...},
//    "output": {"path": "out/fig3", "format": "both"}}
//
// Pauli rates g1..g3 are numbers or preset names (const:c, tanh-neg, sin,
// sin-neg). Requires the vendored nlohmann/json header.

#pragma once

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "kdivis/sweep.hpp"

namespace kdivis {

enum class OutputFormat { Csv, Svg, Both };

inline std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Svg: return "svg";
    case OutputFormat::Both: return "both";
  }
  return "csv";
}

inline std::optional<OutputFormat> parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "svg") return OutputFormat::Svg;
  if (s == "both") return OutputFormat::Both;
  return std::nullopt;
}

struct ModelConfig {
  std::string family = "pauli";
  /// Numeric parameters (every family except the Pauli rates).
  std::map<std::string, double> params;
  /// Pauli rate functions, keyed g1..g3.
  std::map<std::string, RateFunction> rates;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct SweepConfig {
  Axis x;
  Axis y;
  bool measures = true;
  std::size_t max_cells = 20000;

  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct OutputConfig {
  std::string path;
  OutputFormat format = OutputFormat::Both;

  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct RunConfig {
  ModelConfig model;
  std::optional<SweepConfig> sweep;
  RunSettings run;
  /// Worker threads for sweeps; 0 selects the hardware concurrency.
  unsigned jobs = 0;
  OutputConfig output;
};

inline bool operator==(const RunSettings& a, const RunSettings& b) {
  return a.horizon == b.horizon && a.n_steps == b.n_steps && a.epsilon == b.epsilon && a.tolerance == b.tolerance &&
         a.rk4_steps_per_unit == b.rk4_steps_per_unit && a.check_integration == b.check_integration &&
         a.max_condition == b.max_condition && a.positivity == b.positivity &&
         a.positivity_directions == b.positivity_directions && a.positivity_refine == b.positivity_refine &&
         a.blp_pairs == b.blp_pairs && a.blp_threshold == b.blp_threshold && a.rhp_threshold == b.rhp_threshold;
}

inline bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.model == b.model && a.sweep == b.sweep && a.run == b.run && a.jobs == b.jobs && a.output == b.output;
}

/// Names of the Pauli rate slots.
inline const std::array<std::string, 3>& pauli_rate_names() {
  static const std::array<std::string, 3> names{"g1", "g2", "g3"};
  return names;
}

/// Fill in family defaults so that every parameter is explicit.
inline ModelConfig complete(ModelConfig m) {
  const auto& table = family_parameters();
  const auto it = table.find(m.family);
  if (it == table.end()) throw ConfigError("model.family: unknown family '" + m.family + "'");
  if (m.family == "pauli") {
    for (const auto& [name, value] : m.params) m.rates.emplace(name, RateFunction::constant(value));
    m.params.clear();
    for (const auto& name : pauli_rate_names()) m.rates.emplace(name, RateFunction::constant(0.0));
  } else {
    for (const auto& [name, value] : it->second) m.params.emplace(name, value);
  }
  return m;
}

inline ModelSpec to_model(const ModelConfig& cfg) {
  const ModelConfig m = complete(cfg);
  if (m.family == "pauli") return PauliChannelModel{{m.rates.at("g1"), m.rates.at("g2"), m.rates.at("g3")}};
  return make_model(m.family, m.params);
}

inline GridSpec to_grid_spec(const RunConfig& cfg) {
  if (!cfg.sweep) throw ConfigError("sweep: missing");
  const ModelConfig m = complete(cfg.model);
  GridSpec g;
  g.family = m.family;
  g.x = cfg.sweep->x;
  g.y = cfg.sweep->y;
  g.run = cfg.run;
  if (m.family == "pauli") {
    for (const auto& [name, rate] : m.rates) {
      if (name == g.x.name || name == g.y.name) continue;
      if (rate.kind() != RateFunction::Kind::Constant)
        throw ConfigError("model." + name + ": sweeps need constant Pauli rates");
      g.fixed_params[name] = rate.constant_value();
    }
  } else {
    for (const auto& [name, value] : m.params)
      if (name != g.x.name && name != g.y.name) g.fixed_params[name] = value;
  }
  return g;
}

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError((where.empty() ? "" : where + ".") + key + ": unknown key");
}

inline double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  return j.get<double>();
}

inline long long get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) throw ConfigError(path + ": expected an integer");
  return j.get<long long>();
}

inline bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path + ": expected true or false");
  return j.get<bool>();
}

inline std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path + ": expected a string");
  return j.get<std::string>();
}

inline ModelConfig model_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("model: expected an object");
  if (!j.contains("family")) throw ConfigError("model.family: missing");
  ModelConfig m;
  m.family = get_string(j["family"], "model.family");
  const auto& table = family_parameters();
  const auto it = table.find(m.family);
  if (it == table.end()) throw ConfigError("model.family: unknown family '" + m.family + "'");
  for (const auto& [key, value] : j.items()) {
    if (key == "family") continue;
    const std::string path = "model." + key;
    if (!it->second.count(key)) throw ConfigError(path + ": unknown key");
    if (m.family == "pauli") {
      try {
        m.rates[key] = value.is_string() ? RateFunction::parse(value.get<std::string>())
                                         : RateFunction::constant(get_number(value, path));
      } catch (const InvalidArgument& e) {
        throw ConfigError(path + ": " + e.what());
      }
    } else {
      m.params[key] = get_number(value, path);
    }
  }
  return m;
}

inline Axis axis_from_json(const json& j, const std::string& path) {
  reject_unknown(j, path, {"param", "min", "max", "n"});
  for (const char* k : {"param", "min", "max", "n"})
    if (!j.contains(k)) throw ConfigError(path + "." + k + ": missing");
  Axis a;
  a.name = get_string(j["param"], path + ".param");
  a.min = get_number(j["min"], path + ".min");
  a.max = get_number(j["max"], path + ".max");
  const long long n = get_integer(j["n"], path + ".n");
  if (n < 2 || n > 100000) throw ConfigError(path + ".n: must lie in [2, 100000]");
  a.n = static_cast<int>(n);
  if (!(a.min < a.max)) throw ConfigError(path + ": min must be below max");
  return a;
}

inline SweepConfig sweep_from_json(const json& j) {
  reject_unknown(j, "sweep", {"x", "y", "measures", "max_cells"});
  if (!j.contains("x")) throw ConfigError("sweep.x: missing");
  if (!j.contains("y")) throw ConfigError("sweep.y: missing");
  SweepConfig s;
  s.x = axis_from_json(j["x"], "sweep.x");
  s.y = axis_from_json(j["y"], "sweep.y");
  if (j.contains("measures")) s.measures = get_bool(j["measures"], "sweep.measures");
  if (j.contains("max_cells")) {
    const long long c = get_integer(j["max_cells"], "sweep.max_cells");
    if (c < 1) throw ConfigError("sweep.max_cells: must be >= 1");
    s.max_cells = static_cast<std::size_t>(c);
  }
  return s;
}

inline void run_from_json(const json& j, RunSettings& r, unsigned& jobs) {
  reject_unknown(j, "run",
                 {"horizon", "steps", "epsilon", "tolerance", "jobs", "rk4_steps_per_unit", "check_integration",
                  "max_condition", "positivity", "positivity_directions", "positivity_refine", "blp_pairs",
                  "blp_threshold", "rhp_threshold"});
  auto num = [&](const char* k, double& out) {
    if (j.contains(k)) out = get_number(j[k], std::string("run.") + k);
  };
  auto integer = [&](const char* k, int& out) {
    if (j.contains(k)) out = static_cast<int>(get_integer(j[k], std::string("run.") + k));
  };
  num("horizon", r.horizon);
  integer("steps", r.n_steps);
  num("epsilon", r.epsilon);
  num("tolerance", r.tolerance);
  integer("rk4_steps_per_unit", r.rk4_steps_per_unit);
  if (j.contains("check_integration")) r.check_integration = get_bool(j["check_integration"], "run.check_integration");
  num("max_condition", r.max_condition);
  if (j.contains("positivity")) {
    const std::string p = get_string(j["positivity"], "run.positivity");
    if (p == "auto") {
      r.positivity = PositivityMethod::Auto;
    } else if (p == "general") {
      r.positivity = PositivityMethod::General;
    } else {
      throw ConfigError("run.positivity: expected 'auto' or 'general'");
    }
  }
  integer("positivity_directions", r.positivity_directions);
  integer("positivity_refine", r.positivity_refine);
  integer("blp_pairs", r.blp_pairs);
  num("blp_threshold", r.blp_threshold);
  num("rhp_threshold", r.rhp_threshold);
  if (j.contains("jobs")) {
    const long long n = get_integer(j["jobs"], "run.jobs");
    if (n < 0 || n > 4096) throw ConfigError("run.jobs: must lie in [0, 4096]");
    jobs = static_cast<unsigned>(n);
  }
}

inline OutputConfig output_from_json(const json& j) {
  reject_unknown(j, "output", {"path", "format"});
  OutputConfig o;
  if (j.contains("path")) o.path = get_string(j["path"], "output.path");
  if (j.contains("format")) {
    const auto f = parse_format(get_string(j["format"], "output.format"));
    if (!f) throw ConfigError("output.format: expected csv, svg or both");
    o.format = *f;
  }
  return o;
}

/// Line and column (1-based) of a byte offset.
inline std::string position_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

/// Check the semantic invariants of a config. Throws ConfigError with the
/// offending field.
inline void validate(const RunConfig& cfg) {
  try {
    cfg.run.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("run: ") + e.what());
  }
  const ModelConfig m = complete(cfg.model);
  if (cfg.sweep) {
    const auto& names = family_parameters().at(m.family);
    for (const auto* a : {&cfg.sweep->x, &cfg.sweep->y}) {
      const std::string path = a == &cfg.sweep->x ? "sweep.x" : "sweep.y";
      if (!names.count(a->name)) throw ConfigError(path + ".param: unknown parameter '" + a->name + "'");
      if (a->n < 2) throw ConfigError(path + ".n: must be >= 2");
      if (!(a->min < a->max)) throw ConfigError(path + ": min must be below max");
    }
    if (cfg.sweep->x.name == cfg.sweep->y.name) throw ConfigError("sweep: the axes must sweep different parameters");
  }
}

inline RunConfig config_from_json(const nlohmann::json& j) {
  detail::reject_unknown(j, "", {"model", "sweep", "run", "output"});
  RunConfig cfg;
  if (!j.contains("model")) throw ConfigError("model: missing");
  cfg.model = detail::model_from_json(j["model"]);
  if (j.contains("sweep")) cfg.sweep = detail::sweep_from_json(j["sweep"]);
  if (j.contains("run")) detail::run_from_json(j["run"], cfg.run, cfg.jobs);
  if (j.contains("output")) cfg.output = detail::output_from_json(j["output"]);
  validate(cfg);
  return cfg;
}

/// Parse JSON text; syntax errors are reported with line and column.
inline RunConfig parse_config(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("JSON syntax error at " + detail::position_of(text, e.byte > 0 ? e.byte - 1 : 0) + ": " +
                      e.what());
  }
  return config_from_json(j);
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_config(text);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

inline nlohmann::json to_json(const RunConfig& cfg) {
  using nlohmann::json;
  json model = json::object();
  model["family"] = cfg.model.family;
  for (const auto& [k, v] : cfg.model.params) model[k] = v;
  for (const auto& [k, r] : cfg.model.rates) {
    if (r.kind() == RateFunction::Kind::Constant) {
      model[k] = r.constant_value();
    } else {
      model[k] = r.name();
    }
  }
  json out = json::object();
  out["model"] = model;
  if (cfg.sweep) {
    auto axis = [](const Axis& a) { return json{{"param", a.name}, {"min", a.min}, {"max", a.max}, {"n", a.n}}; };
    out["sweep"] = json{{"x", axis(cfg.sweep->x)},
                        {"y", axis(cfg.sweep->y)},
                        {"measures", cfg.sweep->measures},
                        {"max_cells", cfg.sweep->max_cells}};
  }
  const RunSettings& r = cfg.run;
  out["run"] = json{{"horizon", r.horizon},
                    {"steps", r.n_steps},
                    {"epsilon", r.epsilon},
                    {"tolerance", r.tolerance},
                    {"jobs", cfg.jobs},
                    {"rk4_steps_per_unit", r.rk4_steps_per_unit},
                    {"check_integration", r.check_integration},
                    {"max_condition", r.max_condition},
                    {"positivity", r.positivity == PositivityMethod::Auto ? "auto" : "general"},
                    {"positivity_directions", r.positivity_directions},
                    {"positivity_refine", r.positivity_refine},
                    {"blp_pairs", r.blp_pairs},
                    {"blp_threshold", r.blp_threshold},
                    {"rhp_threshold", r.rhp_threshold}};
  out["output"] = json{{"path", cfg.output.path}, {"format", to_string(cfg.output.format)}};
  return out;
}

// ---------------------------------------------------------------------------
// Figure presets

inline const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names{"fig1", "fig2", "fig3", "fig4"};
  return names;
}

/// One run per output file: fig1 has the g3 = +0.5 and g3 = -0.5 slices,
/// the others a single sweep. Output paths are stems relative to the
/// figure directory.
inline std::vector<RunConfig> figure_preset(const std::string& name) {
  std::vector<RunConfig> runs;
  if (name == "fig1") {
    for (const double g3 : {0.5, -0.5}) {
      RunConfig c;
      c.model.family = "pauli";
      c.model.rates["g3"] = RateFunction::constant(g3);
      c.sweep = SweepConfig{{"g1", -1.0, 1.0, 101}, {"g2", -1.0, 1.0, 101}, true, 20000};
      // Constant rates give identical complement steps; a short horizon suffices.
      c.run.horizon = 1.0;
      c.run.n_steps = 20;
      c.output = {g3 > 0 ? "fig1_g3_plus" : "fig1_g3_minus", OutputFormat::Both};
      runs.push_back(c);
    }
  } else if (name == "fig2") {
    RunConfig c;
    c.model.family = "cnot";
    c.model.params = {{"J", 1.0}};
    c.sweep = SweepConfig{{"gamma", 0.0, 1.0, 101}, {"a", 0.0, 1.0, 101}, true, 20000};
    c.run.horizon = 8.0;
    c.run.n_steps = 400;
    c.output = {"fig2", OutputFormat::Both};
    runs.push_back(c);
  } else if (name == "fig3") {
    RunConfig c;
    c.model.family = "ad";
    c.sweep = SweepConfig{{"gamma0", 0.05, 2.0, 101}, {"lambda", 0.1, 2.0, 101}, true, 20000};
    // Revivals near the boundary start as late as t ~ 87 with amplitude
    // ~exp(-lambda t / 2), down to 1e-33. The analytic path returns exact
    // zeros for monotone decay, so any increase counts as a detection.
    c.run.horizon = 90.0;
    c.run.n_steps = 500;
    c.run.blp_threshold = 0.0;
    c.output = {"fig3", OutputFormat::Both};
    runs.push_back(c);
  } else if (name == "fig4") {
    RunConfig c;
    c.model.family = "superradiance";
    c.model.params = {{"gamma0", 1.0}};
    // x_i = (i + 1) pi / 25 hits pi, 2 pi and 3 pi on the grid.
    c.sweep = SweepConfig{{"x", std::numbers::pi / 25.0, 4.0 * std::numbers::pi, 100}, {"a", 0.0, 1.0, 101}, true, 20000};
    c.run.horizon = 10.0;
    c.run.n_steps = 500;
    c.output = {"fig4", OutputFormat::Both};
    runs.push_back(c);
  } else {
    throw ConfigError("unknown figure '" + name + "' (expected fig1, fig2, fig3 or fig4)");
  }
  return runs;
}

// ---------------------------------------------------------------------------
// Output

/// Write `content` to `path` through a temporary sibling and a rename, so a
/// failed run leaves no partial file behind.
inline void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot rename into '" + path.string() + "'");
  }
}

/// Paths for a stem and format: `stem.csv` and/or `stem.svg`. A stem already
/// ending in the single requested extension is used as is.
inline std::vector<std::filesystem::path> output_paths(const std::string& stem, OutputFormat f) {
  auto with = [&](const char* ext) {
    std::filesystem::path p(stem);
    if (p.extension() == ext) return p;
    return std::filesystem::path(stem + ext);
  };
  switch (f) {
    case OutputFormat::Csv: return {with(".csv")};
    case OutputFormat::Svg: return {with(".svg")};
    case OutputFormat::Both: return {std::filesystem::path(stem + ".csv"), std::filesystem::path(stem + ".svg")};
  }
  return {};
}

}  // namespace kdivis
