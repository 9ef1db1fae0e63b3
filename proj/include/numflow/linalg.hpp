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

#include "numflow/network.hpp"

namespace numflow {

// Cholesky factorization of A = I + R^T R, reused by every ADMM x-update.
class SpdFactor {
 public:
  explicit SpdFactor(const RoutingMatrix& r);

  std::vector<double> solve(std::span<const double> b) const;
  const Eigen::MatrixXd& matrix() const { return a_; }
  int size() const { return static_cast<int>(a_.rows()); }

 private:
  Eigen::MatrixXd a_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

inline SpdFactor spd_prefactor(const RoutingMatrix& r) { return SpdFactor(r); }

// Dense copy of a routing matrix, for tests and small direct methods.
Eigen::MatrixXd to_dense(const RoutingMatrix& r);

}  // namespace numflow
