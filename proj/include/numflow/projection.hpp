// Copyright 2026 The numflow Authors
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

#include <span>
#include <vector>

#include "numflow/network.hpp"

namespace numflow {

struct Projection {
  std::vector<double> x;
  // Multipliers of R x <= c (length L) and of -x <= 0 (length N), so that
  // x = x0 - R^T link_multipliers + bound_multipliers.
  std::vector<double> link_multipliers;
  std::vector<double> bound_multipliers;
  int active_set_changes = 0;
};

// Euclidean projection of `x0` onto {x : R x <= c, x >= 0} by the
// Goldfarb-Idnani dual active-set method (identity Hessian). Throws
// Error(kMaxIterExceeded) after 10 (L + N) active-set changes.
Projection project_polytope(std::span<const double> x0, const RoutingMatrix& r,
                            std::span<const double> c);

}  // namespace numflow
