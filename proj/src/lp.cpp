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

#include "numflow/lp.hpp"

#include <algorithm>
#include <limits>

#include "numflow/errors.hpp"

namespace numflow {

LpResult simplex_maximize(const Eigen::MatrixXd& a, std::span<const double> b,
                          std::span<const double> c) {
  const auto m = a.rows();
  const auto n = a.cols();
  if (static_cast<Eigen::Index>(b.size()) != m ||
      static_cast<Eigen::Index>(c.size()) != n) {
    throw Error(ErrorCode::kDimensionMismatch, "simplex: dimension mismatch");
  }
  constexpr double kEps = 1e-12;

  // Rows 0..m-1 are constraints [A | I | b]; row m holds reduced costs.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  t.topLeftCorner(m, n) = a;
  t.block(0, n, m, m).setIdentity();
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b[static_cast<std::size_t>(i)] < 0.0) {
      throw Error(ErrorCode::kInvalidParams, "simplex needs b >= 0");
    }
    t(i, n + m) = b[static_cast<std::size_t>(i)];
  }
  for (Eigen::Index j = 0; j < n; ++j) t(m, j) = c[static_cast<std::size_t>(j)];
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  LpResult out;
  while (true) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n + m; ++j) {
      if (t(m, j) > kEps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;

    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (t(i, enter) <= kEps) continue;
      const double ratio = t(i, n + m) / t(i, enter);
      if (ratio < best - kEps ||
          (ratio <= best + kEps && leave >= 0 &&
           basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
        best = std::min(best, ratio);
        leave = i;
      }
    }
    if (leave < 0) {
      throw Error(ErrorCode::kMaxIterExceeded, "simplex: LP is unbounded");
    }

    t.row(leave) /= t(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i != leave && t(i, enter) != 0.0) {
        t.row(i) -= t(i, enter) * t.row(leave);
      }
    }
    basis[static_cast<std::size_t>(leave)] = enter;
    ++out.pivots;
  }

  out.x.assign(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index v = basis[static_cast<std::size_t>(i)];
    if (v < n) out.x[static_cast<std::size_t>(v)] = t(i, n + m);
  }
  out.duals.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    out.duals[static_cast<std::size_t>(i)] = std::max(0.0, -t(m, n + i));
  }
  out.objective = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    out.objective += c[static_cast<std::size_t>(j)] * out.x[static_cast<std::size_t>(j)];
  }
  return out;
}

}  // namespace numflow
