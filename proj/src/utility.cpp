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

#include "numflow/utility.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "numflow/errors.hpp"

namespace numflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

UtilityTag tag_of(const UtilityFamily& f) {
  return static_cast<UtilityTag>(f.index());
}

std::string_view tag_name(UtilityTag tag) {
  switch (tag) {
    case UtilityTag::kWeightedLog:
      return "log";
    case UtilityTag::kNegPower:
      return "power";
    case UtilityTag::kQuadratic:
      return "quad";
    case UtilityTag::kPwl:
      return "pwl";
  }
  return "unknown";
}

void validate_utility(const UtilityFamily& f) {
  std::visit(
      Overloaded{
          [](const WeightedLog& u) {
            if (!(u.w > 0.0) || !std::isfinite(u.w)) {
              throw Error(ErrorCode::kInvalidUtility, "log weight must be > 0");
            }
          },
          [](const NegPower& u) {
            if (!(u.w > 0.0) || !std::isfinite(u.w)) {
              throw Error(ErrorCode::kInvalidUtility,
                          "power weight must be > 0");
            }
            if (!(u.a >= 1.0) || !std::isfinite(u.a)) {
              throw Error(ErrorCode::kInvalidUtility,
                          "power exponent must be >= 1");
            }
          },
          [](const Quadratic& u) {
            if (!std::isfinite(u.z) || !(u.k > 0.0) ||
                !std::isfinite(u.lower)) {
              throw Error(ErrorCode::kInvalidUtility,
                          "quadratic needs finite z, lower and k > 0");
            }
          },
          [](const PiecewiseLinear&) {},
      },
      f);
}

double evaluate(const UtilityFamily& f, double x) {
  return std::visit(
      Overloaded{
          [x](const WeightedLog& u) { return x > 0.0 ? u.w * std::log(x) : -kInf; },
          [x](const NegPower& u) {
            return x > 0.0 ? -u.w * std::pow(x, -u.a) : -kInf;
          },
          [x](const Quadratic& u) {
            if (x < u.lower) return -kInf;
            const double d = x - u.z;
            return -d * d / (2.0 * u.k);
          },
          [x](const PiecewiseLinear& u) { return pwl_eval(u.f, x); },
      },
      f);
}

double derivative(const UtilityFamily& f, double x) {
  return std::visit(
      Overloaded{
          [x](const WeightedLog& u) { return x > 0.0 ? u.w / x : kInf; },
          [x](const NegPower& u) {
            return x > 0.0 ? u.a * u.w * std::pow(x, -(u.a + 1.0)) : kInf;
          },
          [x](const Quadratic& u) { return -(x - u.z) / u.k; },
          [x](const PiecewiseLinear& u) {
            if (x < 0.0) return kInf;
            const auto& c = u.f.breakpoints();
            const auto it = std::upper_bound(c.begin(), c.end(), x);
            return u.f.slopes()[static_cast<std::size_t>(it - c.begin()) - 1];
          },
      },
      f);
}

double conjugate_derivative(const UtilityFamily& f, double v) {
  return std::visit(
      Overloaded{
          [v](const WeightedLog& u) { return v > 0.0 ? u.w / v : kInf; },
          [v](const NegPower& u) {
            return v > 0.0 ? std::pow(u.a * u.w / v, 1.0 / (u.a + 1.0)) : kInf;
          },
          [](const Quadratic&) -> double {
            throw Error(ErrorCode::kNotLegendre,
                        "quadratic utilities are not of Legendre type");
          },
          [](const PiecewiseLinear&) -> double {
            throw Error(ErrorCode::kNotLegendre,
                        "piecewise-linear utilities are not of Legendre type");
          },
      },
      f);
}

std::function<double(double)> conjugate_derivative(const UtilityFamily& f) {
  const UtilityTag tag = tag_of(f);
  if (tag != UtilityTag::kWeightedLog && tag != UtilityTag::kNegPower) {
    conjugate_derivative(f, 1.0);  // throws kNotLegendre
  }
  return [f](double v) { return conjugate_derivative(f, v); };
}

ClassUtility aggregate_class(std::span<const UtilityFamily> members) {
  if (members.empty()) {
    throw Error(ErrorCode::kInvalidUtility, "a flow class needs K >= 1 flows");
  }
  ClassUtility out;
  out.members_.assign(members.begin(), members.end());
  out.tag_ = tag_of(members.front());
  for (const auto& m : members) {
    validate_utility(m);
    if (tag_of(m) != out.tag_) {
      throw Error(ErrorCode::kMixedTags,
                  "class mixes utility families " +
                      std::string(tag_name(out.tag_)) + " and " +
                      std::string(tag_name(tag_of(m))));
    }
  }
  const double count = static_cast<double>(members.size());

  switch (out.tag_) {
    case UtilityTag::kWeightedLog: {
      for (const auto& m : members) out.weight_sum_ += std::get<WeightedLog>(m).w;
      out.aggregate_ = WeightedLog{out.weight_sum_};
      break;
    }
    case UtilityTag::kNegPower: {
      const double a = std::get<NegPower>(members.front()).a;
      for (const auto& m : members) {
        const auto& p = std::get<NegPower>(m);
        if (p.a != a) {
          throw Error(ErrorCode::kMixedExponent,
                      "power utilities in one class need a common exponent");
        }
        out.weight_sum_ += p.w;
        out.power_sum_ += std::pow(p.w, 1.0 / (a + 1.0));
      }
      out.aggregate_ = NegPower{std::pow(out.power_sum_, a + 1.0), a};
      break;
    }
    case UtilityTag::kQuadratic: {
      out.z_min_ = kInf;
      for (const auto& m : members) {
        const auto& q = std::get<Quadratic>(m);
        if (q.k != 1.0 || q.lower != 0.0) {
          throw Error(ErrorCode::kInvalidUtility,
                      "quadratic class members must have k = 1, lower = 0");
        }
        out.z_sum_ += q.z;
        out.z_min_ = std::min(out.z_min_, q.z);
        out.z_sorted_desc_.push_back(q.z);
      }
      std::sort(out.z_sorted_desc_.begin(), out.z_sorted_desc_.end(),
                std::greater<>());
      out.aggregate_ =
          Quadratic{out.z_sum_, count, out.z_sum_ - count * out.z_min_};
      break;
    }
    case UtilityTag::kPwl: {
      std::vector<PwlConcave> fs;
      fs.reserve(members.size());
      for (const auto& m : members) fs.push_back(std::get<PiecewiseLinear>(m).f);
      out.aggregate_ = PiecewiseLinear{pwl_supconv(fs)};
      break;
    }
  }
  return out;
}

double ClassUtility::water_level(double x) const {
  const std::size_t n = z_sorted_desc_.size();
  double prefix = 0.0;
  for (std::size_t m = 1; m <= n; ++m) {
    prefix += z_sorted_desc_[m - 1];
    const double y = (prefix - x) / static_cast<double>(m);
    if (m == n || y >= z_sorted_desc_[m]) return y;
  }
  return 0.0;  // unreachable for n >= 1
}

double ClassUtility::evaluate(double x) const {
  if (tag_ != UtilityTag::kQuadratic) return numflow::evaluate(aggregate_, x);
  if (x < 0.0) return -kInf;
  const auto& q = std::get<Quadratic>(aggregate_);
  if (x >= q.lower) return numflow::evaluate(aggregate_, x);
  double value = 0.0;
  if (x == 0.0) {
    for (double z : z_sorted_desc_) value -= 0.5 * z * z;
    return value;
  }
  const double y = water_level(x);
  for (double z : z_sorted_desc_) {
    const double d = std::max(0.0, z - y) - z;
    value -= 0.5 * d * d;
  }
  return value;
}

double ClassUtility::derivative(double x) const {
  if (tag_ != UtilityTag::kQuadratic) return numflow::derivative(aggregate_, x);
  if (x >= std::get<Quadratic>(aggregate_).lower) {
    return numflow::derivative(aggregate_, x);
  }
  return x > 0.0 ? water_level(x) : z_sorted_desc_.front();
}

double class_argmax(const ClassUtility& cls, double cap) {
  if (!(cap > 0.0) || !std::isfinite(cap)) {
    throw Error(ErrorCode::kDomainError, "class_argmax needs a finite cap > 0");
  }
  if (cls.derivative(cap) >= 0.0) return cap;
  double lo = 0.0;
  double hi = cap;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * cap; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mid > 0.0 && cls.derivative(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> apportion(const ClassUtility& cls, double x_star) {
  const auto& members = cls.members();
  std::vector<double> u(members.size(), 0.0);
  switch (cls.tag()) {
    case UtilityTag::kWeightedLog: {
      if (!(x_star > 0.0)) {
        throw Error(ErrorCode::kDomainError, "log aggregate needs x > 0");
      }
      for (std::size_t k = 0; k < members.size(); ++k) {
        u[k] = std::get<WeightedLog>(members[k]).w / cls.weight_sum() * x_star;
      }
      break;
    }
    case UtilityTag::kNegPower: {
      if (!(x_star > 0.0)) {
        throw Error(ErrorCode::kDomainError, "power aggregate needs x > 0");
      }
      for (std::size_t k = 0; k < members.size(); ++k) {
        const auto& p = std::get<NegPower>(members[k]);
        u[k] = std::pow(p.w, 1.0 / (p.a + 1.0)) / cls.power_sum() * x_star;
      }
      break;
    }
    case UtilityTag::kQuadratic: {
      if (x_star < 0.0) {
        throw Error(ErrorCode::kDomainError, "quadratic aggregate needs x >= 0");
      }
      const auto& agg = std::get<Quadratic>(cls.aggregate());
      if (x_star >= agg.lower) {
        const double shift = (x_star - cls.z_sum()) / agg.k;
        for (std::size_t k = 0; k < members.size(); ++k) {
          u[k] = std::max(0.0, std::get<Quadratic>(members[k]).z + shift);
        }
      } else if (x_star > 0.0) {
        const double y = cls.water_level(x_star);
        for (std::size_t k = 0; k < members.size(); ++k) {
          u[k] = std::max(0.0, std::get<Quadratic>(members[k]).z - y);
        }
      }
      // The shifts above round at the scale of z; rescale so the rates sum
      // to x_star at the scale of x_star.
      double total = 0.0;
      for (double v : u) total += v;
      if (total > 0.0) {
        for (double& v : u) v *= x_star / total;
      }
      break;
    }
    case UtilityTag::kPwl: {
      if (x_star < 0.0) {
        throw Error(ErrorCode::kDomainError, "pwl aggregate needs x >= 0");
      }
      std::vector<PwlConcave> fs;
      fs.reserve(members.size());
      for (const auto& m : members) fs.push_back(std::get<PiecewiseLinear>(m).f);
      u = pwl_apportion(fs, x_star);
      break;
    }
  }
  return u;
}

}  // namespace numflow
