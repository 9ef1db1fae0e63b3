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

#include "numflow/network.hpp"

namespace numflow {

using FlowRates = std::vector<std::vector<double>>;  // [class][flow]

// Maximum violation of each optimality condition; a report passes iff every
// entry is <= tol.
struct KktReport {
  double primal_infeasibility = 0.0;     // max_l (R x - c)_l^+, and max (-u)^+
  double dual_infeasibility = 0.0;       // max (-lambda)^+
  double complementary_slackness = 0.0;  // max_l |lambda_l (R x - c)_l|
  double stationarity = 0.0;             // relative, see kkt_check_single_path
  double consistency = 0.0;              // max_i |sum_k u_ik - x_i|
  double tol = 0.0;
  bool passed = false;

  double max_residual() const;
  std::string summary() const;
};

// Single-path KKT check with link prices `lambda`. Stationarity compares
// u_ik with g'_ik(lambda^T r_i) relative to max(u_ik, g'_ik) for Legendre
// families; for quadratic and PWL utilities it is the distance from
// lambda^T r_i to the superdifferential of f_ik at u_ik, relative to
// max(1, lambda^T r_i). Throws Error(kDimensionMismatch).
KktReport kkt_check_single_path(const Instance& inst, std::span<const double> x,
                                const FlowRates& u,
                                std::span<const double> lambda, double tol);

// The same check with x = per-class sums of u.
KktReport kkt_check_rates(const Instance& inst, const FlowRates& u,
                          std::span<const double> lambda, double tol);

}  // namespace numflow
