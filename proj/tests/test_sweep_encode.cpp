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

#include <gtest/gtest.h>

#include <cmath>
#include <regex>
#include <set>

#include "kdivis/kdivis.hpp"

namespace kdivis {
namespace {

GridSpec small_ad_grid() {
  GridSpec g;
  g.family = "ad";
  g.x = {"gamma0", 0.1, 2.0, 5};
  g.y = {"lambda", 0.2, 2.0, 4};
  g.run.horizon = 20.0;
  g.run.n_steps = 200;
  return g;
}

TEST(Axis, EndpointsAreExact) {
  const Axis a{"x", std::numbers::pi / 25.0, 4.0 * std::numbers::pi, 100};
  EXPECT_EQ(a.value(0), a.min);
  EXPECT_EQ(a.value(99), a.max);
  EXPECT_NEAR(a.value(24), std::numbers::pi, 1e-14);
}

TEST(GridSpec, Validation) {
  GridSpec g = small_ad_grid();
  EXPECT_NO_THROW(g.validate());
  g.y.name = "gamma0";
  EXPECT_THROW(g.validate(), InvalidArgument);
  g = small_ad_grid();
  g.x.name = "J";
  EXPECT_THROW(g.validate(), InvalidArgument);
  g = small_ad_grid();
  g.x.n = 1;
  EXPECT_THROW(g.validate(), InvalidArgument);
  g = small_ad_grid();
  g.family = "qutrit";
  EXPECT_THROW(g.validate(), InvalidArgument);
  EXPECT_THROW(make_model("ad", {{"J", 1.0}}), InvalidArgument);
}

TEST(Sweep, CellsMatchIndividualClassification) {
  const GridSpec g = small_ad_grid();
  const PhaseDiagramGrid grid = run_sweep(g, true, 2);
  ASSERT_EQ(grid.cells.size(), 20u);
  for (int iy = 0; iy < g.y.n; ++iy)
    for (int ix = 0; ix < g.x.n; ++ix) {
      const GridCell& c = grid.at(ix, iy);
      EXPECT_EQ(c.x, g.x.value(ix));
      EXPECT_EQ(c.y, g.y.value(iy));
      const ModelSpec m = AmplitudeDampingModel{c.x, c.y};
      const ProcessAnalysis a = analyze(m, g.run, true);
      EXPECT_EQ(c.cls, a.verdict.cls);
      EXPECT_EQ(c.blp, a.blp->measure);
      EXPECT_EQ(c.rhp, a.rhp->measure);
    }
}

TEST(Sweep, FailingCellsAreMarkedNotFatal) {
  GridSpec g = small_ad_grid();
  g.y = {"lambda", 0.0, 1.0, 3};  // lambda = 0 is invalid
  const PhaseDiagramGrid grid = run_sweep(g, false, 1);
  for (int ix = 0; ix < g.x.n; ++ix) {
    EXPECT_FALSE(grid.at(ix, 0).cls.has_value());
    EXPECT_FALSE(grid.at(ix, 0).error.empty());
    EXPECT_TRUE(grid.at(ix, 1).cls.has_value());
  }
  const std::string csv = encode_csv(grid);
  EXPECT_NE(csv.find(",ERR,"), std::string::npos);
}

TEST(Csv, HeaderAndRowFormat) {
  PhaseDiagramGrid grid;
  grid.spec = small_ad_grid();
  grid.spec.x.n = 2;
  grid.spec.y.n = 1;
  GridCell a;
  a.x = 0.1;
  a.y = 0.2;
  a.cls = DivisibilityClass::PD1;
  a.near_boundary = true;
  a.blp = 0.0;
  a.rhp = 1.0 / 3.0;
  a.singular_count = 2;
  GridCell b;
  b.x = 2.0;
  b.y = 0.2;
  grid.cells = {a, b};
  EXPECT_EQ(encode_csv(grid),
            "x,y,class,near_boundary,blp,rhp,singular_count\n"
            "0.1,0.2,PD1,1,0,0.333333333,2\n"
            "2,0.2,ERR,0,nan,nan,0\n");
}

TEST(Csv, ParseRejectsMalformedInput) {
  EXPECT_THROW(parse_csv("x,y\n"), InvalidArgument);
  const std::string header = "x,y,class,near_boundary,blp,rhp,singular_count\n";
  EXPECT_THROW(parse_csv(header + "1,2,PD1,0,0\n"), InvalidArgument);
  EXPECT_THROW(parse_csv(header + "1,2,PD3,0,0,0,0\n"), InvalidArgument);
  EXPECT_THROW(parse_csv(header + "1,2,PD1,2,0,0,0\n"), InvalidArgument);
  EXPECT_THROW(parse_csv(header + "1,abc,PD1,0,0,0,0\n"), InvalidArgument);
  const auto rows = parse_csv(header + "1,2,ERR,0,nan,inf,0\n");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].cls.has_value());
  EXPECT_TRUE(std::isnan(rows[0].blp));
  EXPECT_TRUE(std::isinf(rows[0].rhp));
}

PhaseDiagramGrid synthetic_grid(bool with_missed_pd0) {
  PhaseDiagramGrid grid;
  grid.spec.family = "ad";
  grid.spec.x = {"gamma0", 0.0, 1.0, 4};
  grid.spec.y = {"lambda", 0.0, 1.0, 3};
  grid.spec.run.blp_threshold = 1e-5;
  grid.has_measures = true;
  for (int iy = 0; iy < 3; ++iy)
    for (int ix = 0; ix < 4; ++ix) {
      GridCell c;
      c.x = grid.spec.x.value(ix);
      c.y = grid.spec.y.value(iy);
      c.cls = ix == 0 ? DivisibilityClass::PD2 : DivisibilityClass::PD0;
      c.blp = ix >= 2 ? 0.5 : 0.0;
      if (!with_missed_pd0 && ix == 1) c.cls = DivisibilityClass::PD1;
      grid.cells.push_back(c);
    }
  return grid;
}

TEST(Svg, UsesOnlyTheSupportedElements) {
  const std::string svg = encode_svg(synthetic_grid(true));
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\""), std::string::npos);
  std::set<std::string> elements;
  const std::regex tag("<([a-z]+)[ >/]");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), tag); it != std::sregex_iterator(); ++it)
    elements.insert((*it)[1]);
  const std::set<std::string> allowed{"svg", "title", "g", "rect", "line", "polyline", "text"};
  for (const auto& e : elements) EXPECT_TRUE(allowed.count(e)) << e;
  std::size_t rects = 0;
  for (std::size_t p = svg.find("<rect"); p != std::string::npos; p = svg.find("<rect", p + 1)) ++rects;
  EXPECT_EQ(rects, 12u + 3u);  // cells plus legend
  EXPECT_NE(svg.find("#d62728"), std::string::npos);
  EXPECT_NE(svg.find("#9e9e9e"), std::string::npos);
  EXPECT_NE(svg.find(">gamma0<"), std::string::npos);
  EXPECT_NE(svg.find(">lambda<"), std::string::npos);
}

TEST(Svg, ContourOnlyWhenBlpMissesSomePd0Cells) {
  EXPECT_TRUE(has_blp_contour(synthetic_grid(true), 1e-5));
  EXPECT_NE(encode_svg(synthetic_grid(true)).find("blp-contour"), std::string::npos);
  EXPECT_FALSE(has_blp_contour(synthetic_grid(false), 1e-5));
  EXPECT_EQ(encode_svg(synthetic_grid(false)).find("blp-contour"), std::string::npos);
  PhaseDiagramGrid no_measures = synthetic_grid(true);
  no_measures.has_measures = false;
  EXPECT_FALSE(has_blp_contour(no_measures, 1e-5));
}

TEST(MarchingSquares, VerticalLevelLine) {
  const int nx = 6, ny = 4;
  std::vector<double> f;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) f.push_back(ix - 2.5);
  const auto segs = marching_squares(f, nx, ny);
  ASSERT_EQ(segs.size(), static_cast<std::size_t>(ny - 1));
  for (const auto& s : segs) {
    EXPECT_NEAR(s.x0, 2.5, 1e-12);
    EXPECT_NEAR(s.x1, 2.5, 1e-12);
    EXPECT_NEAR(std::abs(s.y1 - s.y0), 1.0, 1e-12);
  }
}

}  // namespace
}  // namespace kdivis
