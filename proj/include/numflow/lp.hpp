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

#include <Eigen/Dense>

namespace numflow {

struct LpResult {
  std::vector<double> x;
  std::vector<double> duals;  // one per row of A, >= 0
  double objective = 0.0;
  int pivots = 0;
};

// maximize c^T x  s.t.  A x <= b, x >= 0, with b >= 0 so the slack basis is
// feasible. Dense tableau simplex with Bland's rule (smallest improving
// column enters; ratio ties leave by smallest basic index), which cannot
// cycle. Throws Error(kMaxIterExceeded) only if the problem is unbounded.
LpResult simplex_maximize(const Eigen::MatrixXd& a, std::span<const double> b,
                          std::span<const double> c);

}  // namespace numflow
