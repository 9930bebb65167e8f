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

// Core library: models, divisibility classification, measures, sweeps and
// the CSV/SVG encoders. The JSON configuration lives in kdivis/config.hpp.

#pragma once

#include "kdivis/errors.hpp"
#include "kdivis/tolerances.hpp"
#include "kdivis/qmat.hpp"
#include "kdivis/models.hpp"
#include "kdivis/integrate.hpp"
#include "kdivis/process.hpp"
#include "kdivis/divisibility.hpp"
#include "kdivis/measures.hpp"
#include "kdivis/sweep.hpp"
#include "kdivis/encode.hpp"
