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
#include <string>
#include <vector>

#include "numflow/kkt.hpp"
#include "numflow/network.hpp"

namespace numflow {

struct SolverParams {
  double r = 20.0;       // ADMM penalty
  double pct = 1e-4;     // ADMM stop: relative augmented Lagrangian change, in percent
  double alpha = 1e-2;   // gradient-projection step
  double sigma = 1.0;    // Chambolle-Pock dual step
  double tau = 0.02;     // Chambolle-Pock primal step
  double theta = 1.0;    // Chambolle-Pock extrapolation
  int max_iter = 20000;
  double tol = 1e-5;     // KKT target for CP and gradient projection

  // Throws Error(kInvalidParams).
  void validate() const;
  bool operator==(const SolverParams&) const = default;
};

struct Solution {
  std::string solver;
  std::vector<double> x;       // per-class aggregate rates (sums of u)
  FlowRates u;                 // per-flow rates
  std::vector<double> lambda;  // class-consistency duals (ADMM), else empty
  std::vector<double> rho;     // link prices, >= 0
  double objective = 0.0;      // sum_ik f_ik(u_ik)
  double l_max = 0.0;          // max_l (R x)_l
  int n_iter = 0;
  double wall_time = 0.0;      // seconds
  bool converged = false;
  double kkt_residual = 0.0;   // KktReport::max_residual() at exit
  double consensus_gap = 0.0;  // ADMM: ||s - x||_inf / ||x||_inf at exit
  double tol = 0.0;            // KKT tolerance the solution claims to meet
  bool operator==(const Solution&) const = default;
};

double total_utility(const Instance& inst, const FlowRates& u);
double max_link_load(const Instance& inst, std::span<const double> x);
std::vector<double> class_sums(const FlowRates& u);

// Recomputes x, objective, l_max and kkt_residual from u and rho; sets tol.
void finalize_solution(const Instance& inst, Solution& sol, double tol);

// Closed-form minimizer of
//   sum_k -w_k log u_k + lambda (sum_k u_k - x) + r/2 (sum_k u_k - x)^2
// with psi = lambda - r x:  u_k = 2 w_k / (psi + sqrt(psi^2 + 4 r sum(w))).
std::vector<double> admm_u_update(double psi, double r,
                                  std::span<const double> w);

// Consecutive iterations whose augmented-Lagrangian change must stay below
// pct percent before ADMM stops.
inline constexpr int kAdmmSettleIterations = 3;

// ADMM on the aggregate recast with per-class closed-form flow updates.
// Weighted-log utilities only (Error(kNotSupportedUtility) otherwise).
// The multipliers of the link box are reported as prices rho >= 0.
Solution solve_admm(const Instance& inst, const SolverParams& params);

// (z + sqrt(z^2 + 4 tau w)) / 2, componentwise.
std::vector<double> cp_prox_f(std::span<const double> z, double tau,
                              std::span<const double> w);

// z - sigma proj_{y <= c}(z / sigma) = max(0, z - sigma c), componentwise.
std::vector<double> cp_prox_gstar(std::span<const double> z, double sigma,
                                  std::span<const double> c);

// Chambolle-Pock on the per-flow problem with the L x K matrix Q.
Solution solve_cp(const Instance& inst, const SolverParams& params);

// Gradient projection on the N-variable aggregate, apportioned at the end.
Solution solve_gradproj(const Instance& inst, const SolverParams& params);

// Aggregate PWL utilities per class, solve the N-class LP by simplex, and
// apportion greedily.
Solution solve_pwl_aggregate(const Instance& inst, const SolverParams& params);

// Weighted-log weights of class i; throws kNotSupportedUtility otherwise.
std::vector<double> log_weights(const FlowClass& cls);

}  // namespace numflow
