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


#include "numflow/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <span>
#include <variant>

#include <Eigen/Dense>

#include "numflow/errors.hpp"
#include "numflow/utility.hpp"

namespace numflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_legendre(const Instance& inst) {
  if (inst.mode != PathMode::kSinglePath) {
    throw Error(ErrorCode::kNotSupportedUtility, "oracle is single-path only");
  }
  for (const auto& cls : inst.classes) {
    for (const auto& f : cls.flows) {
      const auto tag = tag_of(f);
      if (tag != UtilityTag::kWeightedLog && tag != UtilityTag::kNegPower) {
        throw Error(ErrorCode::kNotSupportedUtility,
                    "oracle requires log or power utilities");
      }
    }
  }
}

struct DualPoint {
  double value = kInf;  // sum_ik sup_u (f(u) - p_i u) + rho^T c
  FlowRates u;
  std::vector<double> slope;  // d x_i / d p_i < 0
  std::vector<double> load;   // R x(rho)
};

// d/dp of g'(p) = 1 / f''(g'(p)).
double rate_slope(const UtilityFamily& f, double u) {
  if (const auto* log = std::get_if<WeightedLog>(&f)) return -u * u / log->w;
  const auto& p = std::get<NegPower>(f);
  return -std::pow(u, p.a + 2.0) / (p.a * (p.a + 1.0) * p.w);
}

DualPoint dual_at(const Instance& inst, std::span<const double> rho,
                  std::span<const double> c) {
  DualPoint d;
  const auto price = inst.routing.apply_transpose(rho);
  const std::size_t n = inst.classes.size();
  d.u.resize(n);
  d.slope.assign(n, 0.0);
  std::vector<double> x(n, 0.0);
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(price[i] > 0.0)) return d;
    const auto& flows = inst.classes[i].flows;
    d.u[i].resize(flows.size());
    for (std::size_t k = 0; k < flows.size(); ++k) {
      const double u = conjugate_derivative(flows[k], price[i]);
      d.u[i][k] = u;
      x[i] += u;
      d.slope[i] += rate_slope(flows[k], u);
      value += evaluate(flows[k], u) - price[i] * u;
    }
  }
  for (std::size_t l = 0; l < c.size(); ++l) value += rho[l] * c[l];
  d.value = value;
  d.load = inst.routing.apply(x);
  return d;
}

// max_l |rho_l - max(0, rho_l - (c - R x)_l)|, zero exactly at the optimum.
double projected_gradient(std::span<const double> rho, const DualPoint& d,
                          std::span<const double> c) {
  double worst = 0.0;
  for (std::size_t l = 0; l < c.size(); ++l) {
    const double g = c[l] - d.load[l];
    worst = std::max(worst, std::abs(rho[l] - std::max(0.0, rho[l] - g)));
  }
  return worst;
}

}  // namespace

Solution oracle_solve(const Instance& inst, double tol, int max_iter) {
  require_legendre(inst);
  const auto start = std::chrono::steady_clock::now();
  const auto c = inst.network.capacities();
  const auto links = static_cast<Eigen::Index>(c.size());
  const auto& r = inst.routing;

  // A strictly positive start keeps every path price positive.
  std::vector<double> rho(c.size(), 1.0);
  DualPoint cur = dual_at(inst, rho, c);
  Eigen::VectorXd grad(links), dir(links);
  std::vector<double> trial(c.size());
  Solution sol;
  sol.solver = "oracle";
  int iter = 0;
  while (true) {
    const auto rep = kkt_check_rates(inst, cur.u, rho, tol);
    if (rep.passed) {
      sol.converged = true;
      break;
    }
    if (iter >= max_iter) {
      throw Error(ErrorCode::kNonConvergence, "oracle stalled: " + rep.summary());
    }
    ++iter;

    // Projected Newton: links pinned at zero with a pushing gradient take a
    // gradient step, the rest a Newton step on the reduced Hessian.
    double eps = 0.0;
    for (Eigen::Index l = 0; l < links; ++l) {
      const auto li = static_cast<std::size_t>(l);
      grad[l] = c[li] - cur.load[li];
      eps = std::max(eps, std::abs(rho[li] - std::max(0.0, rho[li] - grad[l])));
    }
    eps = std::min(eps, 1e-3);
    std::vector<Eigen::Index> free;
    for (Eigen::Index l = 0; l < links; ++l) {
      if (!(rho[static_cast<std::size_t>(l)] <= eps && grad[l] > 0.0)) free.push_back(l);
    }
    dir = -grad;
    if (!free.empty()) {
      const auto nf = static_cast<Eigen::Index>(free.size());
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(nf, nf);
      Eigen::VectorXd gf(nf);
      std::vector<Eigen::Index> slot(c.size(), -1);
      for (Eigen::Index a = 0; a < nf; ++a) {
        slot[static_cast<std::size_t>(free[static_cast<std::size_t>(a)])] = a;
        gf[a] = grad[free[static_cast<std::size_t>(a)]];
      }
      for (int i = 0; i < r.cols(); ++i) {
        const double s = -cur.slope[static_cast<std::size_t>(i)];
        for (int l : r.column(i)) {
          const auto a = slot[static_cast<std::size_t>(l)];
          if (a < 0) continue;
          for (int m : r.column(i)) {
            const auto b = slot[static_cast<std::size_t>(m)];
            if (b >= 0) h(a, b) += s;
          }
        }
      }
      const double shift = 1e-12 * std::max(1.0, h.diagonal().maxCoeff());
      h.diagonal().array() += shift;
      const Eigen::VectorXd df = -h.ldlt().solve(gf);
      for (Eigen::Index a = 0; a < nf; ++a) dir[free[static_cast<std::size_t>(a)]] = df[a];
    }

    // Near the optimum the decrease drowns in the round-off of the dual
    // value; a step that keeps the value within that noise and shrinks the
    // projected gradient is then accepted.
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, std::abs(cur.value));
    const double pg = projected_gradient(rho, cur, c);
    bool moved = false;
    for (int attempt = 0; attempt < 2 && !moved; ++attempt) {
      if (attempt == 1) dir = -grad;
      for (double t = 1.0; t > 1e-20; t *= 0.5) {
        double change = 0.0;
        for (Eigen::Index l = 0; l < links; ++l) {
          const auto li = static_cast<std::size_t>(l);
          trial[li] = std::max(0.0, rho[li] + t * dir[l]);
          change += grad[l] * (trial[li] - rho[li]);
        }
        if (!(change < 0.0)) break;
        DualPoint next = dual_at(inst, trial, c);
        if (next.value <= cur.value + 1e-4 * change ||
            (std::isfinite(next.value) && next.value <= cur.value + noise &&
             projected_gradient(trial, next, c) < pg)) {
          rho.swap(trial);
          cur = std::move(next);
          moved = true;
          break;
        }
      }
    }
    if (!moved) {
      throw Error(ErrorCode::kNonConvergence, "oracle line search failed: " +
                                                  rep.summary());
    }
  }

  sol.u = std::move(cur.u);
  sol.rho = std::move(rho);
  sol.n_iter = iter;
  finalize_solution(inst, sol, tol);
  sol.wall_time = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return sol;
}

Instance aggregate_instance(const Instance& inst) {
  std::vector<FlowClass> classes = inst.classes;
  for (auto& cls : classes) cls.flows = {aggregate_class(cls.flows).aggregate()};
  return make_instance(inst.network, std::move(classes), inst.mode, inst.seed);
}

Solution aggregate_oracle_solve(const Instance& inst, double tol) {
  const auto start = std::chrono::steady_clock::now();
  const Solution agg = oracle_solve(aggregate_instance(inst), tol);
  Solution sol;
  sol.solver = "oracle-aggregate";
  sol.u.resize(inst.classes.size());
  for (std::size_t i = 0; i < inst.classes.size(); ++i) {
    sol.u[i] = apportion(aggregate_class(inst.classes[i].flows), agg.x[i]);
  }
  sol.rho = agg.rho;
  sol.n_iter = agg.n_iter;
  sol.converged = agg.converged;
  finalize_solution(inst, sol, tol);
  sol.wall_time = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return sol;
}

}  // namespace numflow
