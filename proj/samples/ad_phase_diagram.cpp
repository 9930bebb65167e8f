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

// Runs a small amplitude-damping sweep and writes it as CSV and SVG.

#include <fstream>
#include <iostream>
#include <string>

#include "kdivis/kdivis.hpp"

int main(int argc, char** argv) {
  kdivis::GridSpec spec;
  spec.family = "ad";
  spec.x = {"gamma0", 0.05, 2.0, 41};
  spec.y = {"lambda", 0.1, 2.0, 41};
  spec.run.horizon = 90.0;
  spec.run.blp_threshold = 0.0;
  const kdivis::PhaseDiagramGrid grid = kdivis::run_sweep(spec, /*compute_measures=*/true);
  const std::string stem = argc > 1 ? argv[1] : "ad_sweep";
  std::ofstream(stem + ".csv") << kdivis::encode_csv(grid);
  std::ofstream(stem + ".svg") << kdivis::encode_svg(grid);
  std::cout << "wrote " << stem << ".csv and " << stem << ".svg\n";
  return 0;
}
