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

#include "numflow/linalg.hpp"

#include "numflow/errors.hpp"

namespace numflow {

SpdFactor::SpdFactor(const RoutingMatrix& r) {
  const int n = r.cols();
  a_ = Eigen::MatrixXd::Identity(n, n);
  // (R^T R)_{ij} = |column i intersect column j|.
  for (int i = 0; i < n; ++i) {
    const auto& ci = r.column(i);
    a_(i, i) += static_cast<double>(ci.size());
    for (int j = i + 1; j < n; ++j) {
      const auto& cj = r.column(j);
      int common = 0;
      auto a = ci.begin();
      auto b = cj.begin();
      while (a != ci.end() && b != cj.end()) {
        if (*a < *b) {
          ++a;
        } else if (*b < *a) {
          ++b;
        } else {
          ++common;
          ++a;
          ++b;
        }
      }
      a_(i, j) += common;
      a_(j, i) += common;
    }
  }
  llt_.compute(a_);
}

std::vector<double> SpdFactor::solve(std::span<const double> b) const {
  if (static_cast<Eigen::Index>(b.size()) != a_.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "SPD solve: wrong rhs length");
  }
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(),
                                              static_cast<Eigen::Index>(b.size()));
  const Eigen::VectorXd x = llt_.solve(rhs);
  return {x.data(), x.data() + x.size()};
}

Eigen::MatrixXd to_dense(const RoutingMatrix& r) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(r.rows(), r.cols());
  for (int j = 0; j < r.cols(); ++j) {
    for (int row : r.column(j)) m(row, j) = 1.0;
  }
  return m;
}

}  // namespace numflow
