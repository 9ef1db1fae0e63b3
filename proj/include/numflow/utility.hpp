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

#include <functional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "numflow/pwl.hpp"

namespace numflow {

// f(u) = w log u on u > 0.
struct WeightedLog {
  double w = 1.0;
  bool operator==(const WeightedLog&) const = default;
};

// f(u) = -w u^{-a} on u > 0, a >= 1.
struct NegPower {
  double w = 1.0;
  double a = 1.0;
  bool operator==(const NegPower&) const = default;
};

// f(u) = -(u - z)^2 / (2 k) on u >= lower. Flow-level members use k = 1 and
// lower = 0; the closed-form class aggregate has k = K and
// lower = sum(z) - K min(z).
struct Quadratic {
  double z = 0.0;
  double k = 1.0;
  double lower = 0.0;
  bool operator==(const Quadratic&) const = default;
};

struct PiecewiseLinear {
  PwlConcave f;
  bool operator==(const PiecewiseLinear&) const = default;
};

using UtilityFamily =
    std::variant<WeightedLog, NegPower, Quadratic, PiecewiseLinear>;

enum class UtilityTag { kWeightedLog, kNegPower, kQuadratic, kPwl };

UtilityTag tag_of(const UtilityFamily& f);
std::string_view tag_name(UtilityTag tag);

// Throws Error(kInvalidUtility) on out-of-range parameters.
void validate_utility(const UtilityFamily& f);

// Extended-real evaluation: -inf outside the domain.
double evaluate(const UtilityFamily& f, double x);

// f'(x) on the interior of the domain (right derivative for PWL).
double derivative(const UtilityFamily& f, double x);

// g'(v) = (f')^{-1}(v) for Legendre-type families; +inf for v <= 0.
// Throws Error(kNotLegendre) for quadratic and PWL utilities.
double conjugate_derivative(const UtilityFamily& f, double v);
std::function<double(double)> conjugate_derivative(const UtilityFamily& f);

// Aggregate utility of one flow class: the supremal convolution of its
// members, together with the parameter sums the closed forms need.
class ClassUtility {
 public:
  const std::vector<UtilityFamily>& members() const { return members_; }
  const UtilityFamily& aggregate() const { return aggregate_; }
  UtilityTag tag() const { return tag_; }
  int size() const { return static_cast<int>(members_.size()); }

  // sum_k w_k (logs and powers).
  double weight_sum() const { return weight_sum_; }
  // sum_k w_k^{1/(a+1)} (powers).
  double power_sum() const { return power_sum_; }
  // sum_k z_k and min_k z_k (quadratics).
  double z_sum() const { return z_sum_; }
  double z_min() const { return z_min_; }

  // Exact supremal convolution. Coincides with evaluate(aggregate(), x)
  // except for quadratics below aggregate().lower, where some member rates
  // are pinned at zero.
  double evaluate(double x) const;
  double derivative(double x) const;

  // Multiplier y with sum_k max(0, z_k - y) = x (quadratics, x > 0).
  double water_level(double x) const;

 private:
  friend ClassUtility aggregate_class(std::span<const UtilityFamily> members);

  std::vector<UtilityFamily> members_;
  UtilityFamily aggregate_;
  UtilityTag tag_ = UtilityTag::kWeightedLog;
  double weight_sum_ = 0.0;
  double power_sum_ = 0.0;
  double z_sum_ = 0.0;
  double z_min_ = 0.0;
  std::vector<double> z_sorted_desc_;
};

// Throws kMixedTags, kMixedExponent or kInvalidUtility.
ClassUtility aggregate_class(std::span<const UtilityFamily> members);

// Maximizer of the class aggregate over [0, cap] (cap > 0), by bisection on
// its nonincreasing derivative.
double class_argmax(const ClassUtility& cls, double cap);

// Per-flow rates u_k = g_k'(f_i'(x_star)) that maximize sum_k f_k(u_k)
// subject to sum_k u_k = x_star. Throws kDomainError outside the domain.
std::vector<double> apportion(const ClassUtility& cls, double x_star);

}  // namespace numflow
