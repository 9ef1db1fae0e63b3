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


#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "numflow/experiment.hpp"
#include "numflow/linalg.hpp"
#include "numflow/lp.hpp"
#include "numflow/oracle.hpp"
#include "numflow/projection.hpp"
#include "numflow/rng.hpp"
#include "numflow/solvers.hpp"
#include "support/expect_error.hpp"
#include "support/oracles.hpp"

namespace numflow {
namespace {

using testing::code_of;

std::vector<UtilityFamily> logs(std::initializer_list<double> w) {
  std::vector<UtilityFamily> out;
  for (double v : w) out.push_back(WeightedLog{v});
  return out;
}

Instance single_link(std::vector<std::vector<UtilityFamily>> classes, double cap = 10.0) {
  const Network net(2, {{1, 2, cap}});
  std::vector<FlowClass> fc;
  for (auto& f : classes) fc.push_back({1, 2, {{1}}, std::move(f)});
  return make_instance(net, std::move(fc));
}

double random_sign_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

RoutingMatrix random_routing(SplitMix64& rng, int rows, int cols) {
  std::vector<std::vector<int>> columns(static_cast<std::size_t>(cols));
  for (auto& col : columns) {
    for (int l = 0; l < rows; ++l) {
      if (rng.uniform_open01() < 0.4) col.push_back(l);
    }
    if (col.empty()) col.push_back(static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(rows))));
  }
  return RoutingMatrix(rows, std::move(columns));
}

TEST(SpdFactor, Examples) {
  const SpdFactor one(RoutingMatrix(2, {{0, 1}}));
  EXPECT_DOUBLE_EQ(one.matrix()(0, 0), 3.0);
  EXPECT_NEAR(one.solve(std::vector<double>{6.0})[0], 2.0, 1e-15);
  const SpdFactor diag(RoutingMatrix(2, {{0}, {1}}));
  EXPECT_EQ(diag.matrix(), Eigen::Matrix2d(Eigen::Vector2d(2.0, 2.0).asDiagonal()).eval());
}

TEST(SpdFactor, RandomResidual) {
  SplitMix64 rng(101);
  for (int t = 0; t < 50; ++t) {
    const RoutingMatrix r = random_routing(rng, 6, 4);
    const SpdFactor f = spd_prefactor(r);
    const Eigen::MatrixXd d = to_dense(r);
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(4, 4) + d.transpose() * d;
    EXPECT_NEAR((f.matrix() - a).norm(), 0.0, 1e-14);
    std::vector<double> b(4);
    for (double& v : b) v = rng.uniform(-10.0, 10.0);
    const auto x = f.solve(b);
    const Eigen::VectorXd res =
        a * Eigen::Map<const Eigen::VectorXd>(x.data(), 4) - Eigen::Map<const Eigen::VectorXd>(b.data(), 4);
    EXPECT_LE(res.norm(), 1e-10 * random_sign_norm(b));
  }
}

// (F(u + h e_j) - F(u)) / h for the per-class subproblem F minimized by
// admm_u_update, expanded so that no large terms cancel.
double u_subproblem_slope(const std::vector<double>& u, std::size_t j, double h,
                          const std::vector<double>& w, double lambda, double r, double x) {
  double s = 0.0;
  for (double v : u) s += v;
  return (-w[j] * std::log1p(h / u[j]) + h * (lambda + r * (s - x)) + 0.5 * r * h * h) / h;
}

TEST(AdmmUUpdate, Examples) {
  const auto u = admm_u_update(-2.0, 1.0, std::vector<double>{1.0, 1.0});
  EXPECT_NEAR(u[0], (1.0 + std::sqrt(3.0)) / 2.0, 1e-14);
  EXPECT_NEAR(u[1], (1.0 + std::sqrt(3.0)) / 2.0, 1e-14);
  EXPECT_NEAR(2 * u[0] * u[0] - 2 * u[0] - 1, 0.0, 1e-13);
  EXPECT_DOUBLE_EQ(admm_u_update(0.0, 1.0, std::vector<double>{1.0})[0], 1.0);
  const auto p = admm_u_update(0.7, 3.0, std::vector<double>{1.0, 2.0, 5.0});
  EXPECT_NEAR(p[1] / p[0], 2.0, 1e-14);
  EXPECT_NEAR(p[2] / p[0], 5.0, 1e-14);
}

TEST(AdmmUUpdate, ExactMinimizer) {
  SplitMix64 rng(102);
  for (int t = 0; t < 200; ++t) {
    const int k = static_cast<int>(rng.uniform_int(1, 20));
    std::vector<double> w(static_cast<std::size_t>(k));
    for (double& v : w) v = rng.uniform_open01();
    const double r = rng.uniform(0.5, 50.0);
    const double lambda = rng.uniform(-5.0, 5.0);
    const double x = rng.uniform(-5.0, 30.0);
    const auto u = admm_u_update(lambda - r * x, r, w);
    for (std::size_t j = 0; j < u.size(); ++j) {
      EXPECT_GT(u[j], 0.0);
      for (double dir : {-1.0, 1.0}) {
        const double h = dir * 1e-6 * u[j];
        EXPECT_GE(dir * u_subproblem_slope(u, j, h, w, lambda, r, x), -1e-8);
      }
    }
  }
}

TEST(ProjectPolytope, Examples) {
  const RoutingMatrix shared(1, {{0}, {0}});
  const std::vector<double> c{10.0};
  const auto inside = project_polytope(std::vector<double>{3.0, 4.0}, shared, c);
  EXPECT_EQ(inside.x, (std::vector<double>{3.0, 4.0}));
  const auto p = project_polytope(std::vector<double>{8.0, 6.0}, shared, c);
  EXPECT_NEAR(p.x[0], 6.0, 1e-12);
  EXPECT_NEAR(p.x[1], 4.0, 1e-12);
  EXPECT_NEAR(p.link_multipliers[0], 2.0, 1e-12);
  const auto box = project_polytope(std::vector<double>{12.0}, RoutingMatrix(1, {{0}}), c);
  EXPECT_NEAR(box.x[0], 10.0, 1e-12);
  const auto neg = project_polytope(std::vector<double>{-1.0, 3.0}, shared, c);
  EXPECT_EQ(neg.x, (std::vector<double>{0.0, 3.0}));
  EXPECT_EQ(code_of([&] { project_polytope(std::vector<double>{1.0}, shared, c); }),
            ErrorCode::kDimensionMismatch);
}

TEST(ProjectPolytope, MatchesEnumerationAndKkt) {
  SplitMix64 rng(103);
  for (int t = 0; t < 200; ++t) {
    const int links = static_cast<int>(rng.uniform_int(1, 4));
    const int n = static_cast<int>(rng.uniform_int(1, 4));
    const RoutingMatrix r = random_routing(rng, links, n);
    std::vector<double> c(static_cast<std::size_t>(links)), x0(static_cast<std::size_t>(n));
    for (double& v : c) v = rng.uniform(1.0, 10.0);
    for (double& v : x0) v = rng.uniform(-5.0, 15.0);
    const auto p = project_polytope(x0, r, c);
    const Eigen::MatrixXd d = to_dense(r);
    Eigen::MatrixXd a(links + n, n);
    a << d, -Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd b(links + n);
    b << Eigen::Map<const Eigen::VectorXd>(c.data(), links), Eigen::VectorXd::Zero(n);
    const Eigen::VectorXd ref =
        testing::qp_by_enumeration(Eigen::Map<const Eigen::VectorXd>(x0.data(), n), a, b);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(p.x[static_cast<std::size_t>(i)], ref[i], 1e-9);
    // x = x0 - R^T mu + nu with complementary multipliers.
    const auto rt = r.apply_transpose(p.link_multipliers);
    const auto load = r.apply(p.x);
    for (int i = 0; i < n; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      EXPECT_NEAR(p.x[ii], x0[ii] - rt[ii] + p.bound_multipliers[ii], 1e-8);
      EXPECT_GE(p.bound_multipliers[ii], -1e-12);
      EXPECT_NEAR(p.bound_multipliers[ii] * p.x[ii], 0.0, 1e-8);
    }
    for (int l = 0; l < links; ++l) {
      const auto li = static_cast<std::size_t>(l);
      EXPECT_LE(load[li], c[li] + 1e-8);
      EXPECT_GE(p.link_multipliers[li], -1e-12);
      EXPECT_NEAR(p.link_multipliers[li] * (load[li] - c[li]), 0.0, 1e-8);
    }
  }
}

TEST(ProjectPolytope, NonExpansive) {
  SplitMix64 rng(104);
  const Instance inst = gen_instance(small_topology(), 20, 1);
  const auto c = inst.network.capacities();
  for (int t = 0; t < 100; ++t) {
    std::vector<double> a(20), b(20);
    for (double& v : a) v = rng.uniform(-5.0, 15.0);
    for (double& v : b) v = rng.uniform(-5.0, 15.0);
    const auto pa = project_polytope(a, inst.routing, c).x;
    const auto pb = project_polytope(b, inst.routing, c).x;
    double dp = 0.0;
    double d0 = 0.0;
    for (std::size_t i = 0; i < 20; ++i) {
      dp += (pa[i] - pb[i]) * (pa[i] - pb[i]);
      d0 += (a[i] - b[i]) * (a[i] - b[i]);
    }
    EXPECT_LE(std::sqrt(dp), std::sqrt(d0) + 1e-10);
  }
}

TEST(CpProx, Examples) {
  EXPECT_DOUBLE_EQ(cp_prox_f(std::vector<double>{0.0}, 1.0, std::vector<double>{1.0})[0], 1.0);
  EXPECT_NEAR(cp_prox_f(std::vector<double>{3.0}, 1e-12, std::vector<double>{1.0})[0], 3.0, 1e-11);
  EXPECT_DOUBLE_EQ(cp_prox_gstar(std::vector<double>{12.0}, 1.0, std::vector<double>{10.0})[0], 2.0);
  EXPECT_DOUBLE_EQ(cp_prox_gstar(std::vector<double>{5.0}, 1.0, std::vector<double>{10.0})[0], 0.0);
}

TEST(CpProx, IdentitiesAndContraction) {
  SplitMix64 rng(105);
  for (int t = 0; t < 1000; ++t) {
    const double z = rng.uniform(-1e3, 1e3);
    const double z2 = rng.uniform(-1e3, 1e3);
    const double tau = std::exp(rng.uniform(-8.0, 2.0));
    const double w = rng.uniform_open01();
    const double u = cp_prox_f(std::vector<double>{z}, tau, std::vector<double>{w})[0];
    const double u2 = cp_prox_f(std::vector<double>{z2}, tau, std::vector<double>{w})[0];
    EXPECT_GT(u, 0.0);
    EXPECT_NEAR(u - z, tau * w / u, 1e-12 * std::max({1.0, std::abs(z), tau * w / u}));
    EXPECT_LE(std::abs(u - u2), std::abs(z - z2) * (1 + 1e-12));

    const double sigma = std::exp(rng.uniform(-3.0, 3.0));
    const double c = rng.uniform(1.0, 20.0);
    const double y = cp_prox_gstar(std::vector<double>{z}, sigma, std::vector<double>{c})[0];
    const double y2 = cp_prox_gstar(std::vector<double>{z2}, sigma, std::vector<double>{c})[0];
    EXPECT_NEAR(y + sigma * std::min(z / sigma, c), z, 1e-12 * std::max(1.0, std::abs(z)));
    EXPECT_LE(std::abs(y - y2), std::abs(z - z2) * (1 + 1e-12));
  }
}

TEST(SolverParams, Validation) {
  SolverParams p;
  EXPECT_NO_THROW(p.validate());
  for (auto mutate : std::vector<void (*)(SolverParams&)>{
           [](SolverParams& q) { q.r = 0.0; }, [](SolverParams& q) { q.alpha = -1.0; },
           [](SolverParams& q) { q.sigma = 0.0; }, [](SolverParams& q) { q.tau = 0.0; },
           [](SolverParams& q) { q.theta = 1.5; }, [](SolverParams& q) { q.max_iter = 0; },
           [](SolverParams& q) { q.tol = 0.0; }, [](SolverParams& q) { q.pct = -1.0; }}) {
    SolverParams q;
    mutate(q);
    EXPECT_EQ(code_of([&] { q.validate(); }), ErrorCode::kInvalidParams);
  }
}

void expect_consistent(const Instance& inst, const Solution& s) {
  EXPECT_NEAR(s.objective, total_utility(inst, s.u), 1e-12 * std::max(1.0, std::abs(s.objective)));
  EXPECT_NEAR(s.l_max, max_link_load(inst, class_sums(s.u)), 1e-12);
  for (double p : s.rho) EXPECT_GE(p, 0.0);
}

TEST(Solvers, SingleClassSingleLink) {
  const Instance inst = single_link({logs({1.0, 1.0})});
  SolverParams p;
  for (const auto& solve : {solve_admm, solve_cp, solve_gradproj}) {
    const Solution s = solve(inst, p);
    EXPECT_TRUE(s.converged) << s.solver;
    EXPECT_NEAR(s.x[0], 10.0, 1e-3) << s.solver;
    EXPECT_NEAR(s.u[0][0], 5.0, 1e-3) << s.solver;
    EXPECT_NEAR(s.u[0][1], 5.0, 1e-3) << s.solver;
    EXPECT_NEAR(s.objective, 2.0 * std::log(5.0), 1e-3) << s.solver;
    expect_consistent(inst, s);
  }
}

TEST(Solvers, TwoClassesSharingOneLink) {
  const Instance inst = single_link({logs({1.0}), logs({3.0})});
  SolverParams p;
  // At pct = 1e-4 ADMM stops with the class split still drifting (x_1 = 2.58).
  p.pct = 1e-8;
  for (const auto& solve : {solve_admm, solve_cp, solve_gradproj}) {
    const Solution s = solve(inst, p);
    EXPECT_TRUE(s.converged) << s.solver;
    EXPECT_NEAR(s.x[0], 2.5, 1e-3) << s.solver;
    EXPECT_NEAR(s.x[1], 7.5, 1e-3) << s.solver;
    ASSERT_EQ(s.rho.size(), 1u);
    EXPECT_NEAR(s.rho[0], 0.4, 1e-3) << s.solver;
  }
}

TEST(Solvers, RejectUnsupportedUtilities) {
  const Instance inst = single_link({{NegPower{1.0, 2.0}}});
  SolverParams p;
  EXPECT_EQ(code_of([&] { solve_admm(inst, p); }), ErrorCode::kNotSupportedUtility);
  EXPECT_EQ(code_of([&] { solve_cp(inst, p); }), ErrorCode::kNotSupportedUtility);
  EXPECT_EQ(code_of([&] { solve_gradproj(inst, p); }), ErrorCode::kNotSupportedUtility);
  EXPECT_EQ(code_of([&] { solve_pwl_aggregate(inst, p); }), ErrorCode::kNotSupportedUtility);
}

TEST(Solvers, NonConvergenceIsAFlag) {
  const Instance inst = gen_instance(small_topology(), 10, 3);
  SolverParams p;
  p.max_iter = 3;
  for (const auto& solve : {solve_admm, solve_cp, solve_gradproj}) {
    const Solution s = solve(inst, p);
    EXPECT_FALSE(s.converged) << s.solver;
    EXPECT_EQ(s.n_iter, 3) << s.solver;
  }
}

TEST(Gradproj, ObjectiveIsMonotone) {
  const Instance inst = gen_instance(small_topology(), 10, 4);
  SolverParams p;
  p.alpha = 1e-2;
  double last = -std::numeric_limits<double>::infinity();
  for (int it : {1, 2, 5, 10, 20, 50, 100, 200, 500}) {
    p.max_iter = it;
    const Solution s = solve_gradproj(inst, p);
    EXPECT_GE(s.objective, last - 1e-12) << it;
    last = s.objective;
  }
}

TEST(Cp, NoExtrapolationOneClass) {
  const Instance inst = single_link({logs({0.3, 0.5, 0.2})});
  SolverParams p;
  p.theta = 0.0;
  p.sigma = 1.0;
  p.tau = 0.2;  // sigma tau |Q|^2 = 0.6 < 1
  const Solution s = solve_cp(inst, p);
  EXPECT_TRUE(s.converged);
  EXPECT_NEAR(s.x[0], 10.0, 1e-3);
}

TEST(Solvers, CrossAgreementOnSmallTopology) {
  for (int n : {10, 15, 20, 25, 30}) {
    for (std::uint64_t rep = 0; rep < 4; ++rep) {
      const Instance inst = gen_instance(small_topology(), n, derive_seed(rep, n));
      const ExperimentConfig cfg = small_graph_config(0);
      const Solution ref = oracle_solve(inst);
      const Solution admm = solve_admm(inst, cfg.params_for("admm", n));
      SolverParams cpp = cfg.params_for("cp", n);
      const double q2 = norm_sq(flow_routing_matrix(inst));
      if (cpp.sigma * cpp.tau * q2 >= 1.0) cpp.tau = 0.9 / (cpp.sigma * q2);
      const Solution cp = solve_cp(inst, cpp);
      const Solution gp = solve_gradproj(inst, cfg.params_for("gradproj", n));
      for (const Solution* s : {&admm, &cp, &gp}) {
        EXPECT_TRUE(s->converged) << s->solver << " N=" << n;
        EXPECT_NEAR(s->objective, ref.objective, 1e-3 * std::abs(ref.objective))
            << s->solver << " N=" << n;
        expect_consistent(inst, *s);
      }
    }
  }
}

TEST(Admm, PaperSettingsOnSmallTopology) {
  for (int n : {10, 15, 20, 25, 30}) {
    const Instance inst = gen_instance(small_topology(), n, derive_seed(42, n));
    SolverParams p;
    p.r = 20.0;
    p.pct = 1e-4;
    const Solution s = solve_admm(inst, p);
    EXPECT_TRUE(s.converged);
    EXPECT_NEAR(s.l_max, 10.0, 1e-3);
    EXPECT_GE(s.n_iter, 100);
    EXPECT_LE(s.n_iter, 600);
    EXPECT_LE(s.consensus_gap, 1e-4);
    EXPECT_LE(s.l_max, 10.0 + 1e-3);
  }
}

// max_i |lambda_i - (R^T rho)_i| / max(1, |lambda_i|): x-stationarity of the
// Lagrangian of the recast problem.
double lambda_stationarity(const Instance& inst, const Solution& s) {
  const auto price = inst.routing.apply_transpose(s.rho);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.lambda.size(); ++i) {
    worst = std::max(worst, std::abs(s.lambda[i] - price[i]) / std::max(1.0, std::abs(s.lambda[i])));
  }
  return worst;
}

TEST(Admm, StationarityAtTightStoppingThreshold) {
  for (int n : {10, 20, 30}) {
    const Instance inst = gen_instance(small_topology(), n, derive_seed(43, n));
    SolverParams p;
    p.pct = 1e-7;
    p.max_iter = 100000;
    const Solution s = solve_admm(inst, p);
    EXPECT_TRUE(s.converged);
    EXPECT_LE(s.consensus_gap, 1e-4);
    EXPECT_LE(s.l_max, 10.0 + 1e-3);
    EXPECT_LE(lambda_stationarity(inst, s), 1e-3) << "N=" << n;
  }
}

TEST(Simplex, SmallLp) {
  // max 3x + 2y, x + y <= 4, x + 3y <= 6, x <= 3 -> (3, 1), objective 11.
  Eigen::MatrixXd a(3, 2);
  a << 1, 1, 1, 3, 1, 0;
  const LpResult r = simplex_maximize(a, std::vector<double>{4, 6, 3}, std::vector<double>{3, 2});
  EXPECT_NEAR(r.x[0], 3.0, 1e-12);
  EXPECT_NEAR(r.x[1], 1.0, 1e-12);
  EXPECT_NEAR(r.objective, 11.0, 1e-12);
  // Duals: y1 = 2, y2 = 0, y3 = 1 with b^T y = 11.
  EXPECT_NEAR(r.duals[0], 2.0, 1e-12);
  EXPECT_NEAR(r.duals[1], 0.0, 1e-12);
  EXPECT_NEAR(r.duals[2], 1.0, 1e-12);
  Eigen::MatrixXd unb(1, 2);
  unb << 1, -1;
  EXPECT_EQ(code_of([&] { simplex_maximize(unb, std::vector<double>{1}, std::vector<double>{0, 1}); }),
            ErrorCode::kMaxIterExceeded);
}

TEST(Simplex, DegenerateLpTerminates) {
  // Classic cycling example under the largest-coefficient rule.
  Eigen::MatrixXd a(3, 4);
  a << 0.5, -5.5, -2.5, 9, 0.5, -1.5, -0.5, 1, 1, 0, 0, 0;
  const LpResult r =
      simplex_maximize(a, std::vector<double>{0, 0, 1}, std::vector<double>{10, -57, -9, -24});
  EXPECT_NEAR(r.objective, 1.0, 1e-12);
}

Instance pwl_instance(int members, double cap) {
  std::vector<UtilityFamily> flows(static_cast<std::size_t>(members),
                                   PiecewiseLinear{PwlConcave({0, 2}, {3, 0})});
  return single_link({flows}, cap);
}

TEST(PwlAggregate, Examples) {
  SolverParams p;
  const Solution a = solve_pwl_aggregate(pwl_instance(1, 10.0), p);
  EXPECT_NEAR(a.x[0], 2.0, 1e-12);
  EXPECT_NEAR(a.objective, 6.0, 1e-12);
  const Solution b = solve_pwl_aggregate(pwl_instance(2, 10.0), p);
  EXPECT_NEAR(b.x[0], 4.0, 1e-12);
  EXPECT_NEAR(b.objective, 12.0, 1e-12);
  const Solution c = solve_pwl_aggregate(pwl_instance(2, 3.0), p);
  EXPECT_NEAR(c.x[0], 3.0, 1e-12);
  EXPECT_NEAR(c.objective, 9.0, 1e-12);
  EXPECT_NEAR(c.u[0][0], 2.0, 1e-12);
  EXPECT_NEAR(c.u[0][1], 1.0, 1e-12);
  EXPECT_NEAR(c.rho[0], 3.0, 1e-12);
  EXPECT_TRUE(c.converged);
}

TEST(PwlAggregate, MatchesFlowLevelLp) {
  // The aggregate LP and the LP over every flow segment have the same value.
  SplitMix64 rng(106);
  for (int t = 0; t < 30; ++t) {
    const Network net = testing::small_random_network(rng, 4, 6);
    std::vector<FlowClass> classes;
    const auto pairs = admissible_pairs(net, EndpointRule::kAllPairs);
    const int n = static_cast<int>(rng.uniform_int(1, 3));
    for (int i = 0; i < n; ++i) {
      const auto& pr = pairs[rng.uniform_index(pairs.size())];
      std::vector<UtilityFamily> flows;
      const int k = static_cast<int>(rng.uniform_int(1, 3));
      for (int j = 0; j < k; ++j) flows.push_back(PiecewiseLinear{testing::random_pwl(rng)});
      classes.push_back({pr.first, pr.second, {dijkstra_path(net, pr.first, pr.second)}, flows});
    }
    const Instance inst = make_instance(net, classes);
    const Solution s = solve_pwl_aggregate(inst, SolverParams{});

    std::vector<std::pair<int, double>> cols;  // class, slope
    std::vector<double> obj, len;
    for (int i = 0; i < n; ++i) {
      for (const auto& f : inst.classes[static_cast<std::size_t>(i)].flows) {
        const auto& pw = std::get<PiecewiseLinear>(f).f;
        for (int b = 0; b + 1 < pw.size(); ++b) {
          cols.push_back({i, pw.slopes()[static_cast<std::size_t>(b)]});
          obj.push_back(pw.slopes()[static_cast<std::size_t>(b)]);
          len.push_back(pw.breakpoints()[static_cast<std::size_t>(b) + 1] -
                        pw.breakpoints()[static_cast<std::size_t>(b)]);
        }
      }
    }
    const int links = net.link_count();
    const auto m = static_cast<Eigen::Index>(links + static_cast<int>(cols.size()));
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(cols.size()));
    std::vector<double> b(net.capacities());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      for (int l : inst.routing.column(cols[j].first)) a(l, static_cast<Eigen::Index>(j)) = 1.0;
      a(links + static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = 1.0;
      b.push_back(len[j]);
    }
    const LpResult ref = simplex_maximize(a, b, obj);
    EXPECT_NEAR(s.objective, ref.objective, 1e-9 * std::max(1.0, ref.objective));
    EXPECT_LE(s.l_max, 15.0 + 1e-9);
    EXPECT_TRUE(kkt_check_rates(inst, s.u, s.rho, 1e-8).passed)
        << kkt_check_rates(inst, s.u, s.rho, 1e-8).summary();
  }
}

}  // namespace
}  // namespace numflow
