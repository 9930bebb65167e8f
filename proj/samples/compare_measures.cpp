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

// Classifies a few processes and prints both non-Markovianity measures.

#include <iostream>
#include <string>

#include "kdivis/kdivis.hpp"

namespace {

void report(const std::string& label, const kdivis::ModelSpec& model, const kdivis::RunSettings& run) {
  const kdivis::ProcessAnalysis a = kdivis::analyze(model, run, /*with_measures=*/true);
  std::cout << label << ": " << kdivis::to_string(a.verdict.cls) << "  blp=" << kdivis::format_number(a.blp->measure)
            << "  rhp=" << kdivis::format_number(a.rhp->measure) << '\n';
}

}  // namespace

int main() {
  kdivis::RunSettings run;
  run.horizon = 10.0;
  run.n_steps = 500;
  report("hall", kdivis::PauliChannelModel::hall(), run);
  report("dephasing", kdivis::PauliChannelModel::constant(0.0, 0.0, 0.5), run);
  report("ad weak coupling", kdivis::AmplitudeDampingModel{0.2, 1.0}, run);
  report("ad strong coupling", kdivis::AmplitudeDampingModel{2.0, 0.5}, run);
  report("cnot a=0.5", kdivis::CnotControlModel{1.0, 0.01, 0.5}, run);
  report("superradiance x=2", kdivis::SuperradianceModel{1.0, 2.0, 0.5}, run);
  return 0;
}
