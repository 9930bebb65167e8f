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

// CSV and SVG encoders for phase-diagram grids.

#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kdivis/sweep.hpp"

namespace kdivis {

inline constexpr std::string_view kCsvHeader = "x,y,class,near_boundary,blp,rhp,singular_count";

/// Nine significant digits; non-finite values print as "nan" / "inf" / "-inf".
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string class_label(const std::optional<DivisibilityClass>& c) { return c ? to_string(*c) : "ERR"; }

inline std::string encode_csv(const PhaseDiagramGrid& grid) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& c : grid.cells) {
    out += format_number(c.x);
    out += ',';
    out += format_number(c.y);
    out += ',';
    out += class_label(c.cls);
    out += c.near_boundary ? ",1," : ",0,";
    out += format_number(c.blp);
    out += ',';
    out += format_number(c.rhp);
    out += ',';
    out += std::to_string(c.singular_count);
    out += '\n';
  }
  return out;
}

struct CsvRow {
  double x = 0.0;
  double y = 0.0;
  std::optional<DivisibilityClass> cls;
  bool near_boundary = false;
  double blp = 0.0;
  double rhp = 0.0;
  int singular_count = 0;
};

/// Inverse of encode_csv. Throws InvalidArgument on malformed input.
inline std::vector<CsvRow> parse_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw InvalidArgument("missing or unexpected CSV header");
  int lineno = 1;
  auto number = [&](const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty())
      throw InvalidArgument("line " + std::to_string(lineno) + ": bad number '" + s + "'");
    return v;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) f.push_back(field);
    if (f.size() != 7) throw InvalidArgument("line " + std::to_string(lineno) + ": expected 7 fields");
    CsvRow r;
    r.x = number(f[0]);
    r.y = number(f[1]);
    if (f[2] != "ERR") {
      r.cls = parse_class(f[2]);
      if (!r.cls) throw InvalidArgument("line " + std::to_string(lineno) + ": bad class '" + f[2] + "'");
    }
    if (f[3] != "0" && f[3] != "1") throw InvalidArgument("line " + std::to_string(lineno) + ": bad flag");
    r.near_boundary = f[3] == "1";
    r.blp = number(f[4]);
    r.rhp = number(f[5]);
    r.singular_count = static_cast<int>(number(f[6]));
    rows.push_back(r);
  }
  return rows;
}

/// Fill colors per class.
struct Palette {
  std::string pd0 = "#d62728";  // red
  std::string pd1 = "#1f5fbf";  // blue
  std::string pd2 = "#9e9e9e";  // gray
  std::string err = "#ffffff";

  const std::string& fill(const std::optional<DivisibilityClass>& c) const {
    if (!c) return err;
    switch (*c) {
      case DivisibilityClass::PD0: return pd0;
      case DivisibilityClass::PD1: return pd1;
      case DivisibilityClass::PD2: return pd2;
    }
    return err;
  }
};

struct Segment {
  double x0, y0, x1, y1;
};

/// Marching squares on a row-major scalar field sampled at integer points
/// (ix, iy); returns the level-0 segments in index coordinates.
inline std::vector<Segment> marching_squares(const std::vector<double>& field, int nx, int ny) {
  std::vector<Segment> segs;
  auto f = [&](int ix, int iy) { return field[static_cast<std::size_t>(iy) * nx + ix]; };
  auto cross = [](double a, double b) { return a / (a - b); };
  for (int iy = 0; iy + 1 < ny; ++iy)
    for (int ix = 0; ix + 1 < nx; ++ix) {
      // Corners counter-clockwise from (ix, iy).
      const std::array<double, 4> v{f(ix, iy), f(ix + 1, iy), f(ix + 1, iy + 1), f(ix, iy + 1)};
      int mask = 0;
      for (int k = 0; k < 4; ++k)
        if (v[k] > 0.0) mask |= 1 << k;
      if (mask == 0 || mask == 15) continue;
      // Edge midpoints, interpolated: 0 bottom, 1 right, 2 top, 3 left.
      auto edge = [&](int e) -> std::array<double, 2> {
        switch (e) {
          case 0: return {ix + cross(v[0], v[1]), static_cast<double>(iy)};
          case 1: return {static_cast<double>(ix + 1), iy + cross(v[1], v[2])};
          case 2: return {ix + 1 - cross(v[2], v[3]), static_cast<double>(iy + 1)};
          default: return {static_cast<double>(ix), iy + 1 - cross(v[3], v[0])};
        }
      };
      auto add = [&](int a, int b) {
        const auto p = edge(a);
        const auto q = edge(b);
        segs.push_back({p[0], p[1], q[0], q[1]});
      };
      const double centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
      switch (mask) {
        case 1: case 14: add(3, 0); break;
        case 2: case 13: add(0, 1); break;
        case 3: case 12: add(3, 1); break;
        case 4: case 11: add(1, 2); break;
        case 6: case 9: add(0, 2); break;
        case 7: case 8: add(3, 2); break;
        case 5:
          if (centre > 0.0) { add(3, 2); add(0, 1); } else { add(3, 0); add(1, 2); }
          break;
        case 10:
          if (centre > 0.0) { add(3, 0); add(1, 2); } else { add(0, 1); add(3, 2); }
          break;
        default: break;
      }
    }
  return segs;
}

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

/// The BLP detection contour is drawn only when the grid carries measures and
/// contains both a detected cell and an undetected PD0 cell.
inline bool has_blp_contour(const PhaseDiagramGrid& grid, double blp_threshold) {
  if (!grid.has_measures) return false;
  bool detected = false;
  bool undetected_pd0 = false;
  for (const auto& c : grid.cells) {
    const bool d = std::isfinite(c.blp) && c.blp > blp_threshold;
    detected = detected || d;
    undetected_pd0 = undetected_pd0 || (!d && c.cls == DivisibilityClass::PD0);
  }
  return detected && undetected_pd0;
}

/// Standalone SVG heatmap: one rect per cell, axes with labels, and the BLP
/// detection contour (dashed) where applicable.
inline std::string encode_svg(const PhaseDiagramGrid& grid, const Palette& palette = {},
                              std::optional<double> blp_threshold = std::nullopt) {
  const int nx = grid.spec.x.n;
  const int ny = grid.spec.y.n;
  const double threshold = blp_threshold.value_or(grid.spec.run.blp_threshold);
  constexpr double left = 80, top = 40, plot = 600, bottom = 60, right = 130;
  const double cw = plot / nx;
  const double ch = plot / ny;
  const double width = left + plot + right;
  const double height = top + plot + bottom;
  auto px = [&](double ix) { return left + (ix + 0.5) * cw; };
  auto py = [&](double iy) { return top + plot - (iy + 0.5) * ch; };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width) << "\" height=\""
    << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n";
  s << "<title>" << detail::xml_escape(grid.spec.family) << " k-divisibility phase diagram</title>\n";
  s << "<g id=\"cells\" shape-rendering=\"crispEdges\">\n";
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const auto& c = grid.at(ix, iy);
      s << "<rect x=\"" << num(left + ix * cw) << "\" y=\"" << num(top + plot - (iy + 1) * ch) << "\" width=\""
        << num(cw) << "\" height=\"" << num(ch) << "\" fill=\"" << palette.fill(c.cls) << "\" class=\""
        << class_label(c.cls) << "\"/>\n";
    }
  s << "</g>\n";

  if (has_blp_contour(grid, threshold)) {
    std::vector<double> field(grid.cells.size());
    for (std::size_t k = 0; k < field.size(); ++k) {
      const double b = grid.cells[k].blp;
      field[k] = std::isfinite(b) ? b - threshold : -threshold;
    }
    s << "<g id=\"blp-contour\" fill=\"none\" stroke=\"#000000\" stroke-width=\"2\" stroke-dasharray=\"6,4\">\n";
    for (const auto& seg : marching_squares(field, nx, ny)) {
      s << "<polyline points=\"" << num(px(seg.x0)) << ',' << num(py(seg.y0)) << ' ' << num(px(seg.x1)) << ','
        << num(py(seg.y1)) << "\"/>\n";
    }
    s << "</g>\n";
  }

  s << "<g id=\"axes\" stroke=\"#000000\" stroke-width=\"1\">\n";
  s << "<line x1=\"" << num(left) << "\" y1=\"" << num(top + plot) << "\" x2=\"" << num(left + plot) << "\" y2=\""
    << num(top + plot) << "\"/>\n";
  s << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left) << "\" y2=\""
    << num(top + plot) << "\"/>\n";
  s << "</g>\n";
  s << "<g id=\"labels\" font-family=\"sans-serif\" font-size=\"14\" fill=\"#000000\">\n";
  s << "<text x=\"" << num(left) << "\" y=\"" << num(top + plot + 20) << "\" text-anchor=\"start\">"
    << num(grid.spec.x.min) << "</text>\n";
  s << "<text x=\"" << num(left + plot) << "\" y=\"" << num(top + plot + 20) << "\" text-anchor=\"end\">"
    << num(grid.spec.x.max) << "</text>\n";
  s << "<text x=\"" << num(left + plot / 2) << "\" y=\"" << num(top + plot + 45) << "\" text-anchor=\"middle\">"
    << detail::xml_escape(grid.spec.x.name) << "</text>\n";
  s << "<text x=\"" << num(left - 8) << "\" y=\"" << num(top + plot) << "\" text-anchor=\"end\">"
    << num(grid.spec.y.min) << "</text>\n";
  s << "<text x=\"" << num(left - 8) << "\" y=\"" << num(top + 12) << "\" text-anchor=\"end\">"
    << num(grid.spec.y.max) << "</text>\n";
  s << "<text x=\"" << num(left - 45) << "\" y=\"" << num(top + plot / 2) << "\" text-anchor=\"middle\" "
    << "transform=\"rotate(-90 " << num(left - 45) << ' ' << num(top + plot / 2) << ")\">"
    << detail::xml_escape(grid.spec.y.name) << "</text>\n";
  const std::array<std::pair<const char*, const std::string*>, 3> legend{
      {{"PD2", &palette.pd2}, {"PD1", &palette.pd1}, {"PD0", &palette.pd0}}};
  for (std::size_t k = 0; k < legend.size(); ++k) {
    const double ly = top + 10 + 26 * k;
    s << "<rect x=\"" << num(left + plot + 20) << "\" y=\"" << num(ly) << "\" width=\"16\" height=\"16\" fill=\""
      << *legend[k].second << "\" stroke=\"#000000\"/>\n";
    s << "<text x=\"" << num(left + plot + 44) << "\" y=\"" << num(ly + 13) << "\">" << legend[k].first
      << "</text>\n";
  }
  s << "</g>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace kdivis
