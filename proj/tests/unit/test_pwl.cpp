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

#include <cmath>
#include <limits>
#include <vector>

#include "numflow/pwl.hpp"
#include "numflow/rng.hpp"
#include "support/expect_error.hpp"
#include "support/oracles.hpp"

namespace numflow {
namespace {

using testing::code_of;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Concave conjugate inf_{x >= 0} (x y - f(x)), attained at a breakpoint.
double conjugate_by_breakpoints(const PwlConcave& f, double y) {
  double best = kInf;
  for (double c : f.breakpoints()) best = std::min(best, c * y - pwl_eval(f, c));
  return best;
}

void expect_same_function(const PwlConcave& a, const PwlConcave& b, double hi, double tol) {
  for (int i = 0; i <= 400; ++i) {
    const double x = hi * i / 400.0;
    EXPECT_NEAR(pwl_eval(a, x), pwl_eval(b, x), tol) << "x=" << x;
  }
}

const PwlConcave kF({0, 2}, {3, 0});

TEST(PwlConcave, Validation) {
  EXPECT_NO_THROW(PwlConcave());
  EXPECT_EQ(code_of([] { PwlConcave({1, 2}, {3, 0}); }), ErrorCode::kInvalidPwl);
  EXPECT_EQ(code_of([] { PwlConcave({0, 2}, {3, 1}); }), ErrorCode::kInvalidPwl);
  EXPECT_EQ(code_of([] { PwlConcave({0, 2, 2}, {3, 1, 0}); }), ErrorCode::kInvalidPwl);
  EXPECT_EQ(code_of([] { PwlConcave({0, 1, 2}, {3, 3, 0}); }), ErrorCode::kInvalidPwl);
  EXPECT_EQ(code_of([] { PwlConcave({0, 1}, {3}); }), ErrorCode::kInvalidPwl);
  EXPECT_EQ(code_of([] { PwlConcave({}, {}); }), ErrorCode::kInvalidPwl);
}

TEST(PwlEval, Examples) {
  EXPECT_DOUBLE_EQ(pwl_eval(kF, 1.0), 3.0);
  EXPECT_DOUBLE_EQ(pwl_eval(kF, 5.0), 6.0);
  EXPECT_EQ(pwl_eval(kF, -1.0), -kInf);
  EXPECT_DOUBLE_EQ(pwl_eval(kF, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(kF.sup(), 6.0);
}

TEST(PwlConjugate, Examples) {
  const PwlConcave g = pwl_conjugate(kF);
  EXPECT_EQ(g.breakpoints(), (std::vector<double>{0, 3}));
  EXPECT_EQ(g.slopes(), (std::vector<double>{2, 0}));
  EXPECT_DOUBLE_EQ(pwl_eval(g, 3.0), 0.0);
  EXPECT_DOUBLE_EQ(pwl_eval(g, 0.0), -6.0);

  const PwlConcave f2({0, 1, 3}, {5, 2, 0});
  const PwlConcave g2 = pwl_conjugate(f2);
  EXPECT_EQ(g2.breakpoints(), (std::vector<double>{0, 2, 5}));
  EXPECT_EQ(g2.slopes(), (std::vector<double>{3, 1, 0}));
  for (int y = 0; y <= 6; ++y) {
    EXPECT_NEAR(pwl_eval(g2, y), conjugate_by_breakpoints(f2, y), 1e-12) << y;
  }
  EXPECT_EQ(pwl_conjugate(PwlConcave()), PwlConcave());
}

TEST(PwlConjugate, InvolutionAndDomain) {
  SplitMix64 rng(31);
  for (int t = 0; t < 200; ++t) {
    const PwlConcave f = testing::random_pwl(rng, 6);
    const PwlConcave g = pwl_conjugate(f);
    EXPECT_EQ(g.breakpoints().front(), 0.0);
    EXPECT_TRUE(std::isfinite(pwl_eval(g, 0.0)));
    for (int i = 0; i <= 50; ++i) {
      const double y = f.slopes().front() * 1.2 * i / 50.0;
      EXPECT_NEAR(pwl_eval(g, y), conjugate_by_breakpoints(f, y), 1e-12);
    }
    expect_same_function(pwl_conjugate(g), f, f.breakpoints().back() * 1.5, 1e-12);
  }
}

TEST(PwlSum, Examples) {
  const std::vector<PwlConcave> id{kF, PwlConcave()};
  EXPECT_EQ(pwl_sum(id), kF);
  const std::vector<PwlConcave> twice{kF, kF};
  EXPECT_EQ(pwl_sum(twice), PwlConcave({0, 2}, {6, 0}));
  const std::vector<PwlConcave> mixed{PwlConcave({0, 1}, {2, 0}), kF};
  const PwlConcave s = pwl_sum(mixed);
  EXPECT_EQ(s.breakpoints(), (std::vector<double>{0, 1, 2}));
  EXPECT_EQ(s.slopes(), (std::vector<double>{5, 3, 0}));
  expect_same_function(s, s, 3.0, 0.0);
  for (int i = 0; i <= 30; ++i) {
    const double x = i * 0.1;
    EXPECT_NEAR(pwl_eval(s, x), pwl_eval(mixed[0], x) + pwl_eval(mixed[1], x), 1e-12);
  }
}

TEST(PwlSum, RandomPointwise) {
  SplitMix64 rng(32);
  for (int t = 0; t < 100; ++t) {
    std::vector<PwlConcave> fs;
    const int k = static_cast<int>(rng.uniform_int(1, 4));
    for (int j = 0; j < k; ++j) fs.push_back(testing::random_pwl(rng));
    const PwlConcave s = pwl_sum(fs);
    const auto& m = s.slopes();
    for (std::size_t b = 1; b < m.size(); ++b) EXPECT_LT(m[b], m[b - 1]);
    for (int i = 0; i <= 100; ++i) {
      const double x = 12.0 * i / 100.0;
      double direct = 0.0;
      for (const auto& f : fs) direct += pwl_eval(f, x);
      EXPECT_NEAR(pwl_eval(s, x), direct, 1e-10);
    }
  }
}

TEST(PwlSupconv, Examples) {
  const std::vector<PwlConcave> id{kF, PwlConcave()};
  expect_same_function(pwl_supconv(id), kF, 5.0, 1e-12);
  const std::vector<PwlConcave> twice{kF, kF};
  const PwlConcave s = pwl_supconv(twice);
  EXPECT_EQ(s, PwlConcave({0, 4}, {3, 0}));
  EXPECT_DOUBLE_EQ(pwl_eval(s, 4.0), 12.0);
  for (int i = 0; i <= 60; ++i) {
    const double x = 0.1 * i;
    EXPECT_NEAR(pwl_eval(s, x), testing::grid_supconv(kF, kF, x, 0.01), 1e-9);
  }
}

TEST(PwlSupconv, ThreeRandomAgainstGrid) {
  SplitMix64 rng(33);
  constexpr double step = 0.01;
  for (int t = 0; t < 10; ++t) {
    const PwlConcave a = testing::random_pwl(rng, 4);
    const PwlConcave b = testing::random_pwl(rng, 4);
    const PwlConcave c = testing::random_pwl(rng, 4);
    const std::vector<PwlConcave> fs{a, b, c};
    const PwlConcave s = pwl_supconv(fs);
    const double max_slope =
        std::max({a.slopes().front(), b.slopes().front(), c.slopes().front()});
    const double hi = a.breakpoints().back() + b.breakpoints().back() + c.breakpoints().back();
    for (int i = 0; i <= 8; ++i) {
      const double x = hi * i / 8.0 + 0.3;
      const double grid = testing::grid_supconv3(a, b, c, x, step);
      EXPECT_GE(pwl_eval(s, x) + 1e-9, grid);
      EXPECT_LE(pwl_eval(s, x) - grid, 2.0 * step * max_slope);
    }
  }
}

TEST(PwlApportion, Examples) {
  const std::vector<PwlConcave> ms{PwlConcave({0, 1}, {5, 0}), PwlConcave({0, 2}, {3, 0})};
  EXPECT_EQ(pwl_apportion(ms, 2.0), (std::vector<double>{1.0, 1.0}));
  const std::vector<PwlConcave> one{kF};
  EXPECT_EQ(pwl_apportion(one, 1.5), (std::vector<double>{1.5}));
  const std::vector<PwlConcave> eq{kF, kF};
  EXPECT_EQ(pwl_apportion(eq, 1.5), (std::vector<double>{1.5, 0.0}));
  EXPECT_EQ(pwl_apportion(eq, 3.0), (std::vector<double>{2.0, 1.0}));
  EXPECT_EQ(pwl_apportion(eq, 10.0), (std::vector<double>{2.0, 2.0}));
}

TEST(PwlApportion, AttainsSupconvAndDominatesSplits) {
  SplitMix64 rng(34);
  for (int t = 0; t < 200; ++t) {
    std::vector<PwlConcave> fs;
    const int k = static_cast<int>(rng.uniform_int(1, 5));
    double cap = 0.0;
    for (int j = 0; j < k; ++j) {
      fs.push_back(testing::random_pwl(rng));
      cap += fs.back().breakpoints().back();
    }
    const PwlConcave s = pwl_supconv(fs);
    const double x = rng.uniform(0.0, 1.2 * cap);
    const auto u = pwl_apportion(fs, x);
    double sum = 0.0;
    double value = 0.0;
    for (int j = 0; j < k; ++j) {
      sum += u[static_cast<std::size_t>(j)];
      value += pwl_eval(fs[static_cast<std::size_t>(j)], u[static_cast<std::size_t>(j)]);
    }
    EXPECT_NEAR(sum, std::min(x, cap), 1e-9);
    EXPECT_NEAR(value, pwl_eval(s, x), 1e-9);
    for (int r = 0; r < 20; ++r) {
      std::vector<double> split(static_cast<std::size_t>(k));
      double tot = 0.0;
      for (double& v : split) tot += (v = rng.uniform_open01());
      double other = 0.0;
      for (int j = 0; j < k; ++j) {
        other += pwl_eval(fs[static_cast<std::size_t>(j)], x * split[static_cast<std::size_t>(j)] / tot);
      }
      EXPECT_LE(other, pwl_eval(s, x) + 1e-9);
    }
  }
}

}  // namespace
}  // namespace numflow
