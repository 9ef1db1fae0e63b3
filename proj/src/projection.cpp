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

#include "numflow/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "numflow/errors.hpp"

namespace numflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Constraint j < L is row j of R (n_j^T x <= c_j); constraint L + i is
// -x_i <= 0.
class ConstraintSet {
 public:
  ConstraintSet(const RoutingMatrix& r, std::span<const double> c)
      : links_(r.rows()), vars_(r.cols()), c_(c), rows_(static_cast<std::size_t>(r.rows())) {
    for (int j = 0; j < r.cols(); ++j) {
      for (int l : r.column(j)) rows_[static_cast<std::size_t>(l)].push_back(j);
    }
  }

  int size() const { return links_ + vars_; }
  bool is_link(int j) const { return j < links_; }

  double rhs(int j) const {
    return is_link(j) ? c_[static_cast<std::size_t>(j)] : 0.0;
  }

  double dot(int j, const Eigen::VectorXd& y) const {
    if (!is_link(j)) return -y(j - links_);
    double s = 0.0;
    for (int i : rows_[static_cast<std::size_t>(j)]) s += y(i);
    return s;
  }

  Eigen::VectorXd normal(int j) const {
    Eigen::VectorXd n = Eigen::VectorXd::Zero(vars_);
    if (!is_link(j)) {
      n(j - links_) = -1.0;
    } else {
      for (int i : rows_[static_cast<std::size_t>(j)]) n(i) = 1.0;
    }
    return n;
  }

  double norm(int j) const {
    return is_link(j)
               ? std::sqrt(static_cast<double>(rows_[static_cast<std::size_t>(j)].size()))
               : 1.0;
  }

 private:
  int links_;
  int vars_;
  std::span<const double> c_;
  std::vector<std::vector<int>> rows_;
};

}  // namespace

Projection project_polytope(std::span<const double> x0, const RoutingMatrix& r,
                            std::span<const double> c) {
  const int n = r.cols();
  const int links = r.rows();
  if (static_cast<int>(x0.size()) != n || static_cast<int>(c.size()) != links) {
    throw Error(ErrorCode::kDimensionMismatch, "projection: dimension mismatch");
  }
  const ConstraintSet cons(r, c);
  const int max_changes = 10 * (links + n);

  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(x0.data(), n);
  std::vector<int> active;
  std::vector<double> mult;
  std::vector<bool> is_active(static_cast<std::size_t>(cons.size()), false);
  int changes = 0;

  const auto violation_tol = [&](int j) {
    return 1e-12 * std::max(1.0, std::abs(cons.rhs(j)));
  };

  auto drop = [&](std::size_t pos) {
    is_active[static_cast<std::size_t>(active[pos])] = false;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(pos));
    mult.erase(mult.begin() + static_cast<std::ptrdiff_t>(pos));
  };

  while (true) {
    int p = -1;
    double worst = 0.0;
    for (int j = 0; j < cons.size(); ++j) {
      if (is_active[static_cast<std::size_t>(j)]) continue;
      const double v = cons.dot(j, y) - cons.rhs(j);
      if (v > violation_tol(j) && v / cons.norm(j) > worst) {
        worst = v / cons.norm(j);
        p = j;
      }
    }
    if (p < 0) break;

    const Eigen::VectorXd np = cons.normal(p);
    double up = 0.0;
    while (true) {
      if (++changes > max_changes) {
        throw Error(ErrorCode::kMaxIterExceeded,
                    "active-set projection did not settle after " +
                        std::to_string(max_changes) + " changes");
      }
      const auto m = static_cast<Eigen::Index>(active.size());
      Eigen::VectorXd rdir(m);
      Eigen::VectorXd z;
      if (m == 0) {
        z = -np;
      } else {
        Eigen::MatrixXd basis(n, m);
        for (Eigen::Index a = 0; a < m; ++a) {
          basis.col(a) = cons.normal(active[static_cast<std::size_t>(a)]);
        }
        const Eigen::MatrixXd gram = basis.transpose() * basis;
        rdir = gram.ldlt().solve(basis.transpose() * np);
        z = -(np - basis * rdir);
      }
      const double zz = z.squaredNorm();
      const double full_step =
          zz > 1e-14 * np.squaredNorm()
              ? (cons.dot(p, y) - cons.rhs(p)) / zz
              : kInf;
      double partial_step = kInf;
      std::size_t blocking = 0;
      for (Eigen::Index a = 0; a < m; ++a) {
        if (rdir(a) > 1e-14) {
          const double ratio = mult[static_cast<std::size_t>(a)] / rdir(a);
          if (ratio < partial_step) {
            partial_step = ratio;
            blocking = static_cast<std::size_t>(a);
          }
        }
      }
      const double t = std::min(full_step, partial_step);
      if (!std::isfinite(t)) {
        throw Error(ErrorCode::kMaxIterExceeded,
                    "projection: constraints are infeasible");
      }
      if (std::isfinite(full_step)) y += t * z;
      for (Eigen::Index a = 0; a < m; ++a) {
        mult[static_cast<std::size_t>(a)] -= t * rdir(a);
      }
      up += t;
      if (full_step <= partial_step) {
        active.push_back(p);
        mult.push_back(up);
        is_active[static_cast<std::size_t>(p)] = true;
        break;
      }
      mult[blocking] = 0.0;
      drop(blocking);
    }
  }

  Projection out;
  out.link_multipliers.assign(static_cast<std::size_t>(links), 0.0);
  out.bound_multipliers.assign(static_cast<std::size_t>(n), 0.0);
  for (std::size_t a = 0; a < active.size(); ++a) {
    const int j = active[a];
    const double u = std::max(0.0, mult[a]);
    if (cons.is_link(j)) {
      out.link_multipliers[static_cast<std::size_t>(j)] = u;
    } else {
      out.bound_multipliers[static_cast<std::size_t>(j - links)] = u;
      y(j - links) = 0.0;
    }
  }
  // Inactive bounds hold only to the feasibility tolerance.
  out.x.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out.x[static_cast<std::size_t>(i)] = std::max(0.0, y(i));
  out.active_set_changes = changes;
  return out;
}

}  // namespace numflow
