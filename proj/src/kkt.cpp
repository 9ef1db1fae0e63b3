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

#include "numflow/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <variant>

#include "numflow/errors.hpp"

namespace numflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative distance between the rate u and the price-implied rate h.
double rate_gap(double u, double h) {
  if (!std::isfinite(h)) return 1.0;
  const double scale = std::max(std::abs(u), std::abs(h));
  return scale > 0.0 ? std::abs(u - h) / scale : 0.0;
}

// Distance from `price` to the superdifferential [lo, hi] of f at u.
double superdiff_gap(const UtilityFamily& f, double u, double price) {
  double lo = 0.0;
  double hi = 0.0;
  if (const auto* q = std::get_if<Quadratic>(&f)) {
    lo = -(u - q->z) / q->k;
    hi = u <= q->lower + 1e-12 ? kInf : lo;
  } else if (const auto* p = std::get_if<PiecewiseLinear>(&f)) {
    const auto& c = p->f.breakpoints();
    const auto& m = p->f.slopes();
    const auto it = std::upper_bound(c.begin(), c.end(), u);
    auto b = static_cast<std::size_t>(it - c.begin());
    b = b == 0 ? 0 : b - 1;
    lo = m[b];
    hi = m[b];
    const double snap = 1e-9 * std::max(1.0, c[b]);
    if (std::abs(u - c[b]) <= snap) {
      hi = b == 0 ? kInf : m[b - 1];
    } else if (b + 1 < c.size() && std::abs(u - c[b + 1]) <= snap) {
      lo = m[b + 1];
    }
  } else {
    lo = hi = derivative(f, u);
  }
  const double gap = price < lo ? lo - price : (price > hi ? price - hi : 0.0);
  return gap / std::max(1.0, std::abs(price));
}

}  // namespace

double KktReport::max_residual() const {
  return std::max({primal_infeasibility, dual_infeasibility,
                   complementary_slackness, stationarity, consistency});
}

std::string KktReport::summary() const {
  std::ostringstream os;
  os << "primal_infeasibility=" << primal_infeasibility
     << " dual_infeasibility=" << dual_infeasibility
     << " complementary_slackness=" << complementary_slackness
     << " stationarity=" << stationarity << " consistency=" << consistency
     << " tol=" << tol << (passed ? " PASS" : " FAIL");
  return os.str();
}

KktReport kkt_check_single_path(const Instance& inst, std::span<const double> x,
                                const FlowRates& u,
                                std::span<const double> lambda, double tol) {
  const int n = inst.class_count();
  const int links = inst.network.link_count();
  if (static_cast<int>(x.size()) != n || static_cast<int>(u.size()) != n ||
      static_cast<int>(lambda.size()) != links ||
      inst.routing.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "KKT check: dimension mismatch");
  }
  KktReport rep;
  rep.tol = tol;
  const auto load = inst.routing.apply(x);
  const auto caps = inst.network.capacities();
  for (int l = 0; l < links; ++l) {
    const auto li = static_cast<std::size_t>(l);
    const double excess = load[li] - caps[li];
    rep.primal_infeasibility = std::max(rep.primal_infeasibility, excess);
    rep.dual_infeasibility = std::max(rep.dual_infeasibility, -lambda[li]);
    rep.complementary_slackness =
        std::max(rep.complementary_slackness, std::abs(lambda[li] * excess));
  }
  const auto path_price = inst.routing.apply_transpose(lambda);
  for (int i = 0; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const auto& flows = inst.classes[ii].flows;
    if (u[ii].size() != flows.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "KKT check: flow count");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < flows.size(); ++k) {
      const double uk = u[ii][k];
      sum += uk;
      rep.primal_infeasibility = std::max(rep.primal_infeasibility, -uk);
      const UtilityTag tag = tag_of(flows[k]);
      const double gap =
          tag == UtilityTag::kWeightedLog || tag == UtilityTag::kNegPower
              ? rate_gap(uk, conjugate_derivative(flows[k], path_price[ii]))
              : superdiff_gap(flows[k], uk, path_price[ii]);
      rep.stationarity = std::max(rep.stationarity, gap);
    }
    rep.consistency = std::max(rep.consistency, std::abs(sum - x[ii]));
  }
  rep.passed = rep.max_residual() <= tol;
  return rep;
}

KktReport kkt_check_rates(const Instance& inst, const FlowRates& u,
                          std::span<const double> lambda, double tol) {
  std::vector<double> x;
  x.reserve(u.size());
  for (const auto& ui : u) {
    double s = 0.0;
    for (double v : ui) s += v;
    x.push_back(s);
  }
  return kkt_check_single_path(inst, x, u, lambda, tol);
}

}  // namespace numflow
