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


#include "numflow/multipath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "numflow/errors.hpp"
#include "numflow/lp.hpp"
#include "numflow/projection.hpp"
#include "numflow/utility.hpp"

namespace numflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct HopOrder {
  bool operator()(const Path& p, const Path& q) const {
    return p.size() != q.size() ? p.size() < q.size() : p < q;
  }
};

double total(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

std::vector<Path> k_paths(const Network& net, NodeId src, NodeId dst, int j) {
  if (j < 1) throw Error(ErrorCode::kInvalidParams, "path count must be >= 1");
  std::vector<Path> found{dijkstra_path(net, src, dst)};
  std::set<Path, HopOrder> candidates;
  const auto links = static_cast<std::size_t>(net.link_count());
  const auto nodes = static_cast<std::size_t>(net.node_count());
  while (static_cast<int>(found.size()) < j) {
    const Path last = found.back();
    std::vector<NodeId> walk{src};
    for (LinkId l : last) walk.push_back(net.link(l).head);
    for (std::size_t s = 0; s < last.size(); ++s) {
      PathFilter filter;
      filter.excluded_links.assign(links, false);
      filter.excluded_nodes.assign(nodes, false);
      for (const auto& p : found) {
        if (p.size() > s && std::equal(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(s),
                                       last.begin())) {
          filter.excluded_links[static_cast<std::size_t>(p[s] - 1)] = true;
        }
      }
      for (std::size_t t = 0; t < s; ++t) {
        filter.excluded_nodes[static_cast<std::size_t>(walk[t] - 1)] = true;
      }
      auto spur = shortest_path(net, walk[s], dst, filter);
      if (!spur) continue;
      Path candidate(last.begin(), last.begin() + static_cast<std::ptrdiff_t>(s));
      candidate.insert(candidate.end(), spur->begin(), spur->end());
      if (std::find(found.begin(), found.end(), candidate) == found.end()) {
        candidates.insert(std::move(candidate));
      }
    }
    if (candidates.empty()) {
      throw Error(ErrorCode::kInsufficientPaths,
                  "only " + std::to_string(found.size()) + " paths from " +
                      std::to_string(src) + " to " + std::to_string(dst));
    }
    found.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }
  return found;
}

Instance gen_multipath_instance(const Network& net, int n_classes, int j,
                                std::uint64_t seed, const GenOptions& options) {
  auto classes = draw_classes(net, n_classes, seed, options);
  for (auto& cls : classes) cls.paths = k_paths(net, cls.source, cls.destination, j);
  return make_instance(net, std::move(classes), PathMode::kMultipath, seed);
}

MultipathAggregate solve_multipath_aggregate(const Instance& inst,
                                             const SolverParams& params) {
  params.validate();
  const std::size_t n = inst.classes.size();
  const auto jj = static_cast<std::size_t>(inst.paths_per_class);
  const auto c = inst.network.capacities();
  const auto& r = inst.routing;
  if (static_cast<std::size_t>(r.cols()) != n * jj) {
    throw Error(ErrorCode::kDimensionMismatch, "multipath routing layout");
  }
  std::vector<double> wbar(n);
  for (std::size_t i = 0; i < n; ++i) wbar[i] = total(log_weights(inst.classes[i]));

  // Interior start: an equal share of every link's capacity per column.
  std::vector<int> users(c.size(), 0);
  for (int col = 0; col < r.cols(); ++col) {
    for (int l : r.column(col)) ++users[static_cast<std::size_t>(l)];
  }
  std::vector<double> x(n * jj);
  for (std::size_t col = 0; col < x.size(); ++col) {
    double share = kInf;
    for (int l : r.column(static_cast<int>(col))) {
      share = std::min(share, c[static_cast<std::size_t>(l)] /
                                  users[static_cast<std::size_t>(l)]);
    }
    x[col] = std::isfinite(share) ? 0.5 * share : 1.0;
  }

  MultipathAggregate out;
  std::vector<double> step(x.size()), mu(x.size()), xbar(n);
  std::vector<double> lambda(c.size(), 0.0);
  int iter = 0;
  double residual = kInf;
  while (iter < params.max_iter) {
    ++iter;
    for (std::size_t i = 0; i < n; ++i) {
      xbar[i] = total(std::span<const double>(x).subspan(i * jj, jj));
    }
    for (std::size_t col = 0; col < x.size(); ++col) {
      const double xb = std::max(xbar[col / jj], std::numeric_limits<double>::min());
      step[col] = x[col] + params.alpha * wbar[col / jj] / xb;
    }
    auto proj = project_polytope(step, r, c);
    x = std::move(proj.x);
    for (std::size_t l = 0; l < c.size(); ++l) {
      lambda[l] = proj.link_multipliers[l] / params.alpha;
    }
    for (std::size_t col = 0; col < x.size(); ++col) {
      mu[col] = x[col] > params.tol ? 0.0 : proj.bound_multipliers[col] / params.alpha;
    }

    residual = 0.0;
    const auto load = r.apply(x);
    for (std::size_t l = 0; l < c.size(); ++l) {
      const double excess = load[l] - c[l];
      residual = std::max({residual, excess, std::abs(lambda[l] * excess)});
    }
    const auto price = r.apply_transpose(lambda);
    for (std::size_t i = 0; i < n; ++i) {
      xbar[i] = total(std::span<const double>(x).subspan(i * jj, jj));
    }
    for (std::size_t col = 0; col < x.size(); ++col) {
      const double v = price[col] - mu[col];
      residual = std::max(residual, v > 0.0
                                        ? std::abs(wbar[col / jj] / v - xbar[col / jj])
                                        : kInf);
    }
    if (residual <= params.tol) {
      out.converged = true;
      break;
    }
  }

  out.x.resize(n);
  out.mu.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.x[i].assign(x.begin() + static_cast<std::ptrdiff_t>(i * jj),
                    x.begin() + static_cast<std::ptrdiff_t>((i + 1) * jj));
    out.mu[i].assign(mu.begin() + static_cast<std::ptrdiff_t>(i * jj),
                     mu.begin() + static_cast<std::ptrdiff_t>((i + 1) * jj));
  }
  out.lambda = std::move(lambda);
  out.n_iter = iter;
  out.residual = residual;
  return out;
}

std::vector<std::vector<double>> allocate_subflows(
    std::span<const double> x_star, std::span<const double> g_bar, double tol,
    bool lp_fallback) {
  for (double v : x_star) {
    if (!(v >= 0.0)) throw Error(ErrorCode::kDomainError, "negative path rate");
  }
  for (double v : g_bar) {
    if (!(v >= 0.0)) throw Error(ErrorCode::kDomainError, "negative flow target");
  }
  const std::size_t paths = x_star.size();
  const std::size_t flows = g_bar.size();
  const double xbar = total(x_star);
  const double gsum = total(g_bar);
  std::vector<std::vector<double>> u(paths, std::vector<double>(flows, 0.0));
  if (std::abs(xbar - gsum) <= tol * std::max(xbar, gsum)) {
    if (xbar == 0.0) return u;
    for (std::size_t j = 0; j < paths; ++j) {
      for (std::size_t k = 0; k < flows; ++k) u[j][k] = x_star[j] * g_bar[k] / xbar;
    }
    return u;
  }
  if (!lp_fallback) {
    throw Error(ErrorCode::kInconsistentTargets,
                "path total " + std::to_string(xbar) + " vs flow total " +
                    std::to_string(gsum));
  }
  const auto vars = static_cast<Eigen::Index>(paths * flows);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(paths + flows), vars);
  std::vector<double> b(x_star.begin(), x_star.end());
  b.insert(b.end(), g_bar.begin(), g_bar.end());
  for (std::size_t j = 0; j < paths; ++j) {
    for (std::size_t k = 0; k < flows; ++k) {
      const auto v = static_cast<Eigen::Index>(j * flows + k);
      a(static_cast<Eigen::Index>(j), v) = 1.0;
      a(static_cast<Eigen::Index>(paths + k), v) = 1.0;
    }
  }
  const std::vector<double> obj(static_cast<std::size_t>(vars), 1.0);
  const LpResult lp = simplex_maximize(a, b, obj);
  for (std::size_t j = 0; j < paths; ++j) {
    for (std::size_t k = 0; k < flows; ++k) u[j][k] = lp.x[j * flows + k];
  }
  return u;
}

MultipathAllocation solve_multipath(const Instance& inst,
                                    const SolverParams& params) {
  const auto agg = solve_multipath_aggregate(inst, params);
  MultipathAllocation out;
  out.x = agg.x;
  out.lambda = agg.lambda;
  out.mu = agg.mu;
  out.n_iter = agg.n_iter;
  out.converged = agg.converged;
  out.u.resize(inst.classes.size());
  std::vector<double> flat;
  for (std::size_t i = 0; i < inst.classes.size(); ++i) {
    const auto w = log_weights(inst.classes[i]);
    const double wbar = total(w);
    const double xbar = total(agg.x[i]);
    std::vector<double> g(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) g[k] = xbar / wbar * w[k];
    out.u[i] = allocate_subflows(agg.x[i], g);
    for (std::size_t k = 0; k < w.size(); ++k) {
      double ubar = 0.0;
      for (const auto& row : out.u[i]) ubar += row[k];
      out.objective += evaluate(inst.classes[i].flows[k], ubar);
    }
    for (const auto& row : out.u[i]) flat.push_back(total(row));
  }
  const auto load = inst.routing.apply(flat);
  out.l_max = load.empty() ? 0.0 : *std::max_element(load.begin(), load.end());
  return out;
}

KktReport kkt_check_multipath(const Instance& inst,
                              const MultipathAllocation& alloc, double tol) {
  const std::size_t n = inst.classes.size();
  const auto jj = static_cast<std::size_t>(inst.paths_per_class);
  const auto c = inst.network.capacities();
  if (alloc.x.size() != n || alloc.u.size() != n || alloc.mu.size() != n ||
      alloc.lambda.size() != c.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "multipath KKT: dimensions");
  }
  KktReport rep;
  rep.tol = tol;
  std::vector<double> flat;
  flat.reserve(n * jj);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t flows = inst.classes[i].flows.size();
    if (alloc.x[i].size() != jj || alloc.mu[i].size() != jj || alloc.u[i].size() != jj) {
      throw Error(ErrorCode::kDimensionMismatch, "multipath KKT: path count");
    }
    for (std::size_t j = 0; j < jj; ++j) {
      if (alloc.u[i][j].size() != flows) {
        throw Error(ErrorCode::kDimensionMismatch, "multipath KKT: flow count");
      }
      const double s = total(alloc.u[i][j]);
      rep.consistency = std::max(rep.consistency, std::abs(s - alloc.x[i][j]));
      flat.push_back(s);
    }
  }
  const auto load = inst.routing.apply(flat);
  for (std::size_t l = 0; l < c.size(); ++l) {
    const double excess = load[l] - c[l];
    rep.primal_infeasibility = std::max(rep.primal_infeasibility, excess);
    rep.dual_infeasibility = std::max(rep.dual_infeasibility, -alloc.lambda[l]);
    rep.complementary_slackness =
        std::max(rep.complementary_slackness, std::abs(alloc.lambda[l] * excess));
  }
  const auto price = inst.routing.apply_transpose(alloc.lambda);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& flows = inst.classes[i].flows;
    for (std::size_t k = 0; k < flows.size(); ++k) {
      double ubar = 0.0;
      for (std::size_t j = 0; j < jj; ++j) ubar += alloc.u[i][j][k];
      for (std::size_t j = 0; j < jj; ++j) {
        const double u = alloc.u[i][j][k];
        const double mu = alloc.mu[i][j];
        rep.primal_infeasibility = std::max(rep.primal_infeasibility, -u);
        rep.dual_infeasibility = std::max(rep.dual_infeasibility, -mu);
        rep.complementary_slackness =
            std::max(rep.complementary_slackness, std::abs(mu * u));
        const double h = conjugate_derivative(flows[k], price[i * jj + j] - mu);
        rep.stationarity =
            std::max(rep.stationarity, std::isfinite(h) ? std::abs(h - ubar) : kInf);
      }
    }
  }
  rep.passed = rep.max_residual() <= tol;
  return rep;
}

}  // namespace numflow
