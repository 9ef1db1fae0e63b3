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

#include "numflow/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <variant>

#include "numflow/errors.hpp"
#include "numflow/linalg.hpp"
#include "numflow/lp.hpp"
#include "numflow/projection.hpp"
#include "numflow/utility.hpp"

namespace numflow {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_single_path(const Instance& inst, const char* solver) {
  if (inst.mode != PathMode::kSinglePath) {
    throw Error(ErrorCode::kNotSupportedUtility,
                std::string(solver) + " solves single-path instances only");
  }
}

std::vector<std::vector<double>> all_log_weights(const Instance& inst) {
  std::vector<std::vector<double>> w;
  w.reserve(inst.classes.size());
  for (const auto& cls : inst.classes) w.push_back(log_weights(cls));
  return w;
}

double sum(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

// Strictly feasible start: each class gets the smallest fair share of the
// links on its path.
std::vector<double> interior_start(const RoutingMatrix& r,
                                   std::span<const double> c) {
  std::vector<int> users(static_cast<std::size_t>(r.rows()), 0);
  for (int j = 0; j < r.cols(); ++j) {
    for (int l : r.column(j)) ++users[static_cast<std::size_t>(l)];
  }
  std::vector<double> x(static_cast<std::size_t>(r.cols()));
  for (int j = 0; j < r.cols(); ++j) {
    double share = std::numeric_limits<double>::infinity();
    for (int l : r.column(j)) {
      share = std::min(share, c[static_cast<std::size_t>(l)] /
                                  users[static_cast<std::size_t>(l)]);
    }
    x[static_cast<std::size_t>(j)] = std::isfinite(share) ? 0.5 * share : 1.0;
  }
  return x;
}

FlowRates apportion_logs(const std::vector<std::vector<double>>& w,
                         std::span<const double> x) {
  FlowRates u(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double wbar = sum(w[i]);
    u[i].resize(w[i].size());
    for (std::size_t k = 0; k < w[i].size(); ++k) u[i][k] = w[i][k] / wbar * x[i];
  }
  return u;
}

}  // namespace

void SolverParams::validate() const {
  const auto bad = [](const char* what) {
    throw Error(ErrorCode::kInvalidParams, what);
  };
  if (!(r > 0.0)) bad("r must be > 0");
  if (!(pct > 0.0)) bad("pct must be > 0");
  if (!(alpha > 0.0)) bad("alpha must be > 0");
  if (!(sigma > 0.0)) bad("sigma must be > 0");
  if (!(tau > 0.0)) bad("tau must be > 0");
  if (!(theta >= 0.0 && theta <= 1.0)) bad("theta must lie in [0, 1]");
  if (max_iter < 1) bad("max_iter must be positive");
  if (!(tol > 0.0)) bad("tol must be > 0");
}

std::vector<double> log_weights(const FlowClass& cls) {
  std::vector<double> w;
  w.reserve(cls.flows.size());
  for (const auto& f : cls.flows) {
    const auto* log = std::get_if<WeightedLog>(&f);
    if (log == nullptr) {
      throw Error(ErrorCode::kNotSupportedUtility,
                  "solver requires weighted-log utilities");
    }
    w.push_back(log->w);
  }
  return w;
}

double total_utility(const Instance& inst, const FlowRates& u) {
  double total = 0.0;
  for (std::size_t i = 0; i < inst.classes.size(); ++i) {
    const auto& flows = inst.classes[i].flows;
    for (std::size_t k = 0; k < flows.size(); ++k) {
      total += evaluate(flows[k], u[i][k]);
    }
  }
  return total;
}

double max_link_load(const Instance& inst, std::span<const double> x) {
  const auto load = inst.routing.apply(x);
  return load.empty() ? 0.0 : *std::max_element(load.begin(), load.end());
}

std::vector<double> class_sums(const FlowRates& u) {
  std::vector<double> x;
  x.reserve(u.size());
  for (const auto& ui : u) x.push_back(sum(ui));
  return x;
}

void finalize_solution(const Instance& inst, Solution& sol, double tol) {
  sol.x = class_sums(sol.u);
  sol.objective = total_utility(inst, sol.u);
  sol.l_max = max_link_load(inst, sol.x);
  sol.kkt_residual = kkt_check_single_path(inst, sol.x, sol.u, sol.rho, tol)
                         .max_residual();
  sol.tol = tol;
}

std::vector<double> admm_u_update(double psi, double r,
                                  std::span<const double> w) {
  const double wbar = sum(w);
  const double root = std::sqrt(psi * psi + 4.0 * r * wbar);
  std::vector<double> u(w.size());
  // For psi < 0 the denominator psi + root cancels; use the conjugate form.
  for (std::size_t k = 0; k < w.size(); ++k) {
    u[k] = psi >= 0.0 ? 2.0 * w[k] / (psi + root)
                      : w[k] * (root - psi) / (2.0 * r * wbar);
  }
  return u;
}

Solution solve_admm(const Instance& inst, const SolverParams& params) {
  params.validate();
  require_single_path(inst, "ADMM");
  const auto start = Clock::now();
  const auto w = all_log_weights(inst);
  const auto& routing = inst.routing;
  const auto c = inst.network.capacities();
  const std::size_t n = inst.classes.size();
  const std::size_t links = c.size();
  const double r = params.r;

  const SpdFactor factor(routing);

  FlowRates u(n);
  std::vector<double> s(n), x(n), lambda(n, 0.0), rho(links, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    u[i].assign(w[i].size(), 1.0);
    s[i] = static_cast<double>(w[i].size());
  }
  x = s;
  std::vector<double> rx = routing.apply(x);
  std::vector<double> y = rx;

  const auto augmented_lagrangian = [&]() {
    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < w[i].size(); ++k) {
        value -= w[i][k] * std::log(u[i][k]);
      }
      const double gap = s[i] - x[i];
      value += lambda[i] * gap + 0.5 * r * gap * gap;
    }
    for (std::size_t l = 0; l < links; ++l) {
      const double gap = y[l] - rx[l];
      value += rho[l] * gap + 0.5 * r * gap * gap;
    }
    return value;
  };

  Solution sol;
  sol.solver = "admm";
  double previous = augmented_lagrangian();
  const double threshold = params.pct / 100.0;
  std::vector<double> b(n), shifted(links);
  int iter = 0;
  int streak = 0;
  while (iter < params.max_iter) {
    ++iter;
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = admm_u_update(lambda[i] - r * x[i], r, w[i]);
      s[i] = sum(u[i]);
    }
    for (std::size_t l = 0; l < links; ++l) {
      y[l] = std::min(c[l], rx[l] - rho[l] / r);
      shifted[l] = y[l] + rho[l] / r;
    }
    const auto rt = routing.apply_transpose(shifted);
    for (std::size_t i = 0; i < n; ++i) b[i] = s[i] + lambda[i] / r + rt[i];
    x = factor.solve(b);
    rx = routing.apply(x);
    for (std::size_t i = 0; i < n; ++i) lambda[i] += r * (s[i] - x[i]);
    for (std::size_t l = 0; l < links; ++l) rho[l] += r * (y[l] - rx[l]);

    const double current = augmented_lagrangian();
    streak = std::abs(current - previous) < threshold * std::abs(previous) ? streak + 1 : 0;
    previous = current;
    if (streak >= kAdmmSettleIterations) {
      sol.converged = true;
      break;
    }
  }

  double gap = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    gap = std::max(gap, std::abs(s[i] - x[i]));
    scale = std::max(scale, std::abs(x[i]));
  }
  sol.consensus_gap = scale > 0.0 ? gap / scale : gap;
  sol.u = std::move(u);
  sol.lambda = lambda;
  sol.rho.resize(links);
  for (std::size_t l = 0; l < links; ++l) sol.rho[l] = std::max(0.0, -rho[l]);
  sol.n_iter = iter;
  finalize_solution(inst, sol, params.tol);
  // The stopping rule is not a KKT test; the claim is the exit residual
  // rounded up to two significant digits.
  if (sol.kkt_residual > sol.tol) {
    const double scale = std::pow(10.0, std::floor(std::log10(sol.kkt_residual)) - 1.0);
    sol.tol = std::ceil(sol.kkt_residual / scale * (1.0 + 1e-12)) * scale;
  }
  sol.wall_time = seconds_since(start);
  return sol;
}

std::vector<double> cp_prox_f(std::span<const double> z, double tau,
                              std::span<const double> w) {
  if (z.size() != w.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "cp_prox_f: length mismatch");
  }
  std::vector<double> u(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double q = 4.0 * tau * w[k];
    const double root = std::sqrt(z[k] * z[k] + q);
    u[k] = z[k] >= 0.0 ? 0.5 * (z[k] + root) : 0.5 * q / (root - z[k]);
  }
  return u;
}

std::vector<double> cp_prox_gstar(std::span<const double> z, double sigma,
                                  std::span<const double> c) {
  if (z.size() != c.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "cp_prox_gstar: length mismatch");
  }
  std::vector<double> y(z.size());
  for (std::size_t l = 0; l < z.size(); ++l) {
    y[l] = std::max(0.0, z[l] - sigma * c[l]);
  }
  return y;
}

Solution solve_cp(const Instance& inst, const SolverParams& params) {
  params.validate();
  require_single_path(inst, "Chambolle-Pock");
  const auto start = Clock::now();
  const auto w_nested = all_log_weights(inst);
  std::vector<double> w;
  for (const auto& wi : w_nested) w.insert(w.end(), wi.begin(), wi.end());
  const RoutingMatrix q = flow_routing_matrix(inst);
  const auto c = inst.network.capacities();
  const auto offsets = inst.flow_offsets();
  const std::size_t flows = w.size();
  const std::size_t links = c.size();

  std::vector<double> u(flows, 1.0), v = u, y(links, 0.0), z_dual(links),
      z_primal(flows);
  const auto nest = [&](const std::vector<double>& flat) {
    FlowRates out(inst.classes.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i].assign(flat.begin() + offsets[i], flat.begin() + offsets[i + 1]);
    }
    return out;
  };

  Solution sol;
  sol.solver = "cp";
  int iter = 0;
  while (iter < params.max_iter) {
    ++iter;
    const auto qv = q.apply(v);
    for (std::size_t l = 0; l < links; ++l) z_dual[l] = y[l] + params.sigma * qv[l];
    y = cp_prox_gstar(z_dual, params.sigma, c);
    const auto qty = q.apply_transpose(y);
    for (std::size_t k = 0; k < flows; ++k) z_primal[k] = u[k] - params.tau * qty[k];
    auto next = cp_prox_f(z_primal, params.tau, w);
    for (std::size_t k = 0; k < flows; ++k) {
      v[k] = next[k] + params.theta * (next[k] - u[k]);
    }
    u = std::move(next);
    if (kkt_check_rates(inst, nest(u), y, params.tol).passed) {
      sol.converged = true;
      break;
    }
  }

  sol.u = nest(u);
  sol.rho = y;
  sol.n_iter = iter;
  finalize_solution(inst, sol, params.tol);
  sol.wall_time = seconds_since(start);
  return sol;
}

Solution solve_gradproj(const Instance& inst, const SolverParams& params) {
  params.validate();
  require_single_path(inst, "gradient projection");
  const auto start = Clock::now();
  const auto w = all_log_weights(inst);
  const auto c = inst.network.capacities();
  const std::size_t n = inst.classes.size();
  std::vector<double> wbar(n);
  for (std::size_t i = 0; i < n; ++i) wbar[i] = sum(w[i]);

  std::vector<double> x = interior_start(inst.routing, c);
  std::vector<double> step(n);
  Solution sol;
  sol.solver = "gradproj";
  sol.rho.assign(c.size(), 0.0);
  int iter = 0;
  while (iter < params.max_iter) {
    ++iter;
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = std::max(x[i], std::numeric_limits<double>::min());
      step[i] = x[i] + params.alpha * wbar[i] / xi;
    }
    auto proj = project_polytope(step, inst.routing, c);
    x = std::move(proj.x);
    for (std::size_t l = 0; l < c.size(); ++l) {
      sol.rho[l] = proj.link_multipliers[l] / params.alpha;
    }
    if (kkt_check_single_path(inst, x, apportion_logs(w, x), sol.rho,
                              params.tol)
            .passed) {
      sol.converged = true;
      break;
    }
  }

  sol.u = apportion_logs(w, x);
  sol.n_iter = iter;
  finalize_solution(inst, sol, params.tol);
  sol.wall_time = seconds_since(start);
  return sol;
}

Solution solve_pwl_aggregate(const Instance& inst, const SolverParams& params) {
  params.validate();
  require_single_path(inst, "PWL aggregate LP");
  const auto start = Clock::now();
  const auto c = inst.network.capacities();
  const std::size_t n = inst.classes.size();
  const std::size_t links = c.size();

  std::vector<ClassUtility> classes;
  classes.reserve(n);
  for (const auto& cls : inst.classes) {
    for (const auto& f : cls.flows) {
      if (tag_of(f) != UtilityTag::kPwl) {
        throw Error(ErrorCode::kNotSupportedUtility,
                    "PWL solver requires piecewise-linear utilities");
      }
    }
    classes.push_back(aggregate_class(cls.flows));
  }

  // One LP column per positive-slope segment of each class aggregate.
  struct Column {
    std::size_t cls;
    double slope;
    double length;
  };
  std::vector<Column> columns;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = std::get<PiecewiseLinear>(classes[i].aggregate()).f;
    for (int b = 0; b + 1 < f.size(); ++b) {
      const auto bi = static_cast<std::size_t>(b);
      columns.push_back({i, f.slopes()[bi],
                         f.breakpoints()[bi + 1] - f.breakpoints()[bi]});
    }
  }
  const auto m = static_cast<Eigen::Index>(links + columns.size());
  const auto cols = static_cast<Eigen::Index>(columns.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, cols);
  std::vector<double> rhs(static_cast<std::size_t>(m));
  std::vector<double> obj(columns.size());
  for (std::size_t l = 0; l < links; ++l) rhs[l] = c[l];
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    for (int l : inst.routing.column(static_cast<int>(columns[j].cls))) {
      a(l, jj) = 1.0;
    }
    a(static_cast<Eigen::Index>(links) + jj, jj) = 1.0;
    rhs[links + j] = columns[j].length;
    obj[j] = columns[j].slope;
  }
  const LpResult lp = simplex_maximize(a, rhs, obj);

  std::vector<double> x(n, 0.0);
  for (std::size_t j = 0; j < columns.size(); ++j) x[columns[j].cls] += lp.x[j];

  Solution sol;
  sol.solver = "pwl";
  sol.u.resize(n);
  for (std::size_t i = 0; i < n; ++i) sol.u[i] = apportion(classes[i], x[i]);
  sol.rho.assign(lp.duals.begin(), lp.duals.begin() + static_cast<std::ptrdiff_t>(links));
  sol.n_iter = lp.pivots;
  sol.converged = true;
  finalize_solution(inst, sol, params.tol);
  sol.wall_time = seconds_since(start);
  return sol;
}

}  // namespace numflow
