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


// Independent reference computations used only by the tests.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "numflow/network.hpp"
#include "numflow/pwl.hpp"
#include "numflow/rng.hpp"

namespace numflow::testing {

// All simple directed paths src -> dst by depth-first search.
inline std::vector<Path> enumerate_simple_paths(const Network& net, NodeId src, NodeId dst) {
  std::vector<Path> out;
  std::vector<bool> seen(static_cast<std::size_t>(net.node_count() + 1), false);
  Path current;
  std::function<void(NodeId)> dfs = [&](NodeId at) {
    if (at == dst) {
      out.push_back(current);
      return;
    }
    seen[static_cast<std::size_t>(at)] = true;
    for (LinkId id = 1; id <= net.link_count(); ++id) {
      const auto& l = net.link(id);
      if (l.tail != at || seen[static_cast<std::size_t>(l.head)]) continue;
      current.push_back(id);
      dfs(l.head);
      current.pop_back();
    }
    seen[static_cast<std::size_t>(at)] = false;
  };
  dfs(src);
  return out;
}

// sup over x1 + x2 = x of f1(x1) + f2(x2), on a grid of the given step.
inline double grid_supconv(const PwlConcave& f1, const PwlConcave& f2, double x, double step) {
  double best = -std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(std::floor(x / step + 1e-9));
  for (int i = 0; i <= n; ++i) {
    const double a = std::min(x, i * step);
    best = std::max(best, pwl_eval(f1, a) + pwl_eval(f2, x - a));
  }
  return best;
}

// Three-way version over a 2-simplex grid.
inline double grid_supconv3(const PwlConcave& f1, const PwlConcave& f2, const PwlConcave& f3,
                            double x, double step) {
  double best = -std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(std::floor(x / step + 1e-9));
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; i + j <= n; ++j) {
      const double a = i * step;
      const double b = j * step;
      best = std::max(best, pwl_eval(f1, a) + pwl_eval(f2, b) + pwl_eval(f3, x - a - b));
    }
  }
  return best;
}

// minimize |x - x0|^2 / 2 subject to A x <= b, by enumerating active sets.
// Only for a handful of constraints.
inline Eigen::VectorXd qp_by_enumeration(const Eigen::VectorXd& x0, const Eigen::MatrixXd& a,
                                         const Eigen::VectorXd& b) {
  const int m = static_cast<int>(a.rows());
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd arg = x0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> act;
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) act.push_back(i);
    }
    Eigen::VectorXd x = x0;
    Eigen::VectorXd nu;
    if (!act.empty()) {
      Eigen::MatrixXd aa(static_cast<Eigen::Index>(act.size()), a.cols());
      Eigen::VectorXd ba(static_cast<Eigen::Index>(act.size()));
      for (std::size_t r = 0; r < act.size(); ++r) {
        aa.row(static_cast<Eigen::Index>(r)) = a.row(act[r]);
        ba[static_cast<Eigen::Index>(r)] = b[act[r]];
      }
      const Eigen::MatrixXd g = aa * aa.transpose();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
      if (lu.rank() < g.rows()) continue;
      nu = lu.solve(aa * x0 - ba);
      if ((nu.array() < -1e-12).any()) continue;
      x = x0 - aa.transpose() * nu;
    }
    if (((a * x - b).array() > 1e-10).any()) continue;
    const double d = (x - x0).squaredNorm();
    if (d < best) {
      best = d;
      arg = x;
    }
  }
  return arg;
}

// Random valid PWL: B in [2, max_b], breakpoints from 0, slopes down to 0.
inline PwlConcave random_pwl(SplitMix64& rng, int max_b = 5, double max_slope = 5.0) {
  const int b = static_cast<int>(rng.uniform_int(2, max_b));
  std::vector<double> c{0.0};
  for (int i = 1; i < b; ++i) c.push_back(c.back() + 0.25 + 2.0 * rng.uniform_open01());
  std::vector<double> m(static_cast<std::size_t>(b), 0.0);
  double slope = 0.0;
  for (int i = b - 2; i >= 0; --i) {
    slope += 0.1 + max_slope / b * rng.uniform_open01();
    m[static_cast<std::size_t>(i)] = slope;
  }
  return PwlConcave(c, m);
}

// Small strongly connected random instance in the spirit of the tests'
// criteria: ring plus extra links, <= max_nodes nodes, <= max_links links.
inline Network small_random_network(SplitMix64& rng, int max_nodes = 6, int max_links = 8,
                                    bool bidirectional = false) {
  const int m = static_cast<int>(rng.uniform_int(3, max_nodes));
  const int ring = bidirectional ? 2 * m : m;
  const int cap = std::min(max_links, m * (m - 1));
  const int l = std::min(cap, ring + static_cast<int>(rng.uniform_index(
                                        static_cast<std::uint64_t>(std::max(1, cap - ring + 1)))));
  return random_topology(m, std::max(l, ring), rng.next(), 5.0, 15.0, bidirectional);
}

}  // namespace numflow::testing
