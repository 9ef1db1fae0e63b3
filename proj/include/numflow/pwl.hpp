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

#include <span>
#include <vector>

namespace numflow {

// Closed proper concave piecewise-linear function on [0, inf):
//
//   f(x) = offset + sum_b slopes[b] * clamp(x - breakpoints[b], 0, len_b)
//
// with 0 = breakpoints[0] < ... < breakpoints[B-1] and
// slopes[0] > ... > slopes[B-1] = 0. The last segment is flat and unbounded,
// and f(x) = -inf for x < 0. `offset` is f(0); it is zero for utilities and
// carries the affine part of conjugates.
class PwlConcave {
 public:
  // Zero function: B = 1, breakpoints (0), slopes (0).
  PwlConcave();

  // Throws Error(kInvalidPwl) if the invariants above do not hold.
  PwlConcave(std::vector<double> breakpoints, std::vector<double> slopes,
             double offset = 0.0);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& slopes() const { return slopes_; }
  double offset() const { return offset_; }
  int size() const { return static_cast<int>(breakpoints_.size()); }

  // Value at the last breakpoint; f is constant from there on.
  double sup() const;

  bool operator==(const PwlConcave&) const = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> slopes_;
  double offset_ = 0.0;
};

// Breakpoints and slopes closer than this are merged.
inline constexpr double kPwlMergeTol = 1e-12;

double pwl_eval(const PwlConcave& f, double x);

// Concave conjugate f*(y) = inf_{x >= 0} (x*y - f(x)). Breakpoints and slopes
// exchange roles; f*(m_1) = -f(0).
PwlConcave pwl_conjugate(const PwlConcave& f);

PwlConcave pwl_sum(std::span<const PwlConcave> fs);

// f_1 <> ... <> f_K computed as (sum_k f_k*)*.
PwlConcave pwl_supconv(std::span<const PwlConcave> fs);

// Greedy fill of positive-slope segments in order of decreasing slope; ties
// go to the lower member index, then the lower segment index. Returns rates
// summing to min(x_star, total length of positive-slope segments).
std::vector<double> pwl_apportion(std::span<const PwlConcave> members,
                                  double x_star);

}  // namespace numflow
