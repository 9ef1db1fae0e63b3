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

#include <cstdint>
#include <span>
#include <vector>

#include "numflow/network.hpp"
#include "numflow/solvers.hpp"

namespace numflow {

// J loop-free paths in (hop count, link sequence) order by Yen's scheme with
// min-hop spur searches; the first equals dijkstra_path. Distinct simple
// paths are distinct link sets. Throws Error(kInsufficientPaths).
std::vector<Path> k_paths(const Network& net, NodeId src, NodeId dst, int j);

// draw_classes() followed by k_paths() for every class.
Instance gen_multipath_instance(const Network& net, int n_classes, int j,
                                std::uint64_t seed,
                                const GenOptions& options = {});

struct MultipathAggregate {
  std::vector<std::vector<double>> x;   // [class][path]
  std::vector<double> lambda;           // link prices, length L
  std::vector<std::vector<double>> mu;  // [class][path], >= 0
  int n_iter = 0;
  bool converged = false;
  double residual = 0.0;
};

// Projected gradient on max sum_i wbar_i log(sum_j x_ij) over
// {R x <= c, x >= 0}; step params.alpha. Prices are the projection
// multipliers divided by the step; mu_ij is 0 whenever x_ij > params.tol.
// Stops when the aggregate KKT residual (absolute, in rate units) is at most
// params.tol. Weighted-log utilities only.
MultipathAggregate solve_multipath_aggregate(const Instance& inst,
                                             const SolverParams& params);

// Proportional solution u[j][k] = x_star[j] g_bar[k] / xbar of
//   sum_k u[j][k] = x_star[j], sum_j u[j][k] = g_bar[k], u >= 0.
// Throws Error(kInconsistentTargets) when the two totals differ by more than
// tol * xbar, unless `lp_fallback` is set: then the transportation LP
// max sum u s.t. both marginals as upper bounds is solved instead.
std::vector<std::vector<double>> allocate_subflows(
    std::span<const double> x_star, std::span<const double> g_bar,
    double tol = 1e-9, bool lp_fallback = false);

struct MultipathAllocation {
  std::vector<std::vector<double>> x;               // [class][path]
  std::vector<std::vector<std::vector<double>>> u;  // [class][path][flow]
  std::vector<double> lambda;                       // link prices
  std::vector<std::vector<double>> mu;              // [class][path]
  double objective = 0.0;
  double l_max = 0.0;
  int n_iter = 0;
  bool converged = false;
  bool operator==(const MultipathAllocation&) const = default;
};

// Aggregate solve, targets g_ik = (xbar_i / wbar_i) w_ik, then
// allocate_subflows per class.
MultipathAllocation solve_multipath(const Instance& inst,
                                    const SolverParams& params);

// Conditions of the full multipath problem with sigma_ijk = mu_ij:
// feasibility (links, u >= 0), lambda >= 0, mu >= 0, |lambda_l (R x - c)_l|,
// |mu_ij u_ijk|, consistency |sum_k u_ijk - x_ij|, and the absolute
// stationarity |h_ik([S_i^T lambda]_j - mu_ij) - sum_j u_ijk| (infinite when
// the argument is not positive). Throws Error(kDimensionMismatch).
KktReport kkt_check_multipath(const Instance& inst,
                              const MultipathAllocation& alloc, double tol);

}  // namespace numflow
