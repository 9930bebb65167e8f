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

#pragma once

namespace kdivis {

/// Every numerical tolerance used by the matrix layer, in one place.
struct Tolerances {
  /// Hermiticity and unit trace when a state or operator is constructed.
  double construct = 1e-12;
  /// Smallest eigenvalue a density matrix may have.
  double min_state_eigenvalue = -1e-10;
  /// Symmetry / trace-preservation checks on derived objects.
  double check = 1e-10;
  /// Condition number above which `invert` throws SingularMap.
  double max_condition = 1e8;
  /// Residual bound ||Av - lambda v|| for eigen-decompositions in debug builds.
  double eigen_residual = 1e-9;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace kdivis
