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

#include "numflow/network.hpp"
#include "numflow/solvers.hpp"

namespace numflow {

// Reference solver: minimizes the dual over link prices rho >= 0 with
// per-flow recovery u_ik = g'_ik(rho^T r_i), by projected Newton steps
// (gradient steps on links pinned at zero) and an Armijo search along the
// projection arc. Runs until the single-path KKT residual is <= tol.
// WeightedLog or NegPower utilities. Throws Error(kNonConvergence) after
// max_iter steps or when no descent step exists.
Solution oracle_solve(const Instance& inst, double tol = 1e-7,
                      int max_iter = 10000);

// One flow per class carrying the class aggregate utility.
Instance aggregate_instance(const Instance& inst);

// Solves the aggregate instance with the oracle and apportions each class
// rate among its members.
Solution aggregate_oracle_solve(const Instance& inst, double tol = 1e-7);

}  // namespace numflow
