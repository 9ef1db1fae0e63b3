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

#include "numflow/pwl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "numflow/errors.hpp"

namespace numflow {

namespace {

void validate(const std::vector<double>& c, const std::vector<double>& m,
              double offset) {
  if (c.empty() || c.size() != m.size()) {
    throw Error(ErrorCode::kInvalidPwl,
                "breakpoints and slopes must be non-empty and equally long");
  }
  if (c.front() != 0.0) {
    throw Error(ErrorCode::kInvalidPwl, "first breakpoint must be 0");
  }
  if (m.back() != 0.0) {
    throw Error(ErrorCode::kInvalidPwl, "last slope must be 0");
  }
  if (!std::isfinite(offset)) {
    throw Error(ErrorCode::kInvalidPwl, "offset must be finite");
  }
  for (std::size_t b = 0; b < c.size(); ++b) {
    if (!std::isfinite(c[b]) || !std::isfinite(m[b]) || c[b] < 0.0 ||
        m[b] < 0.0) {
      throw Error(ErrorCode::kInvalidPwl,
                  "breakpoints and slopes must be finite and nonnegative");
    }
    if (b > 0 && !(c[b] > c[b - 1])) {
      throw Error(ErrorCode::kInvalidPwl,
                  "breakpoints must be strictly increasing (index " +
                      std::to_string(b) + ")");
    }
    if (b > 0 && !(m[b] < m[b - 1])) {
      throw Error(ErrorCode::kInvalidPwl,
                  "slopes must be strictly decreasing (index " +
                      std::to_string(b) + ")");
    }
  }
}

// Slope of f on the segment that starts at `x` (x must be >= 0).
double slope_at(const PwlConcave& f, double x) {
  const auto& c = f.breakpoints();
  auto it = std::upper_bound(c.begin(), c.end(), x + kPwlMergeTol);
  const auto idx = static_cast<std::size_t>(it - c.begin()) - 1;
  return f.slopes()[idx];
}

}  // namespace

PwlConcave::PwlConcave() : breakpoints_{0.0}, slopes_{0.0}, offset_(0.0) {}

PwlConcave::PwlConcave(std::vector<double> breakpoints,
                       std::vector<double> slopes, double offset)
    : breakpoints_(std::move(breakpoints)),
      slopes_(std::move(slopes)),
      offset_(offset) {
  validate(breakpoints_, slopes_, offset_);
}

double PwlConcave::sup() const { return pwl_eval(*this, breakpoints_.back()); }

double pwl_eval(const PwlConcave& f, double x) {
  if (x < 0.0) return -std::numeric_limits<double>::infinity();
  const auto& c = f.breakpoints();
  const auto& m = f.slopes();
  double value = f.offset();
  for (std::size_t b = 0; b + 1 < c.size(); ++b) {
    if (x <= c[b]) break;
    value += m[b] * (std::min(x, c[b + 1]) - c[b]);
  }
  return value;
}

PwlConcave pwl_conjugate(const PwlConcave& f) {
  const auto& c = f.breakpoints();
  const auto& m = f.slopes();
  const std::size_t n = c.size();
  std::vector<double> bp(n), sl(n);
  for (std::size_t j = 0; j < n; ++j) {
    bp[j] = m[n - 1 - j];
    sl[j] = c[n - 1 - j];
  }
  // Anchor f*(m_1) = -f(0) and walk back to y = 0.
  double offset = -f.offset();
  for (std::size_t j = 0; j + 1 < n; ++j) {
    offset -= sl[j] * (bp[j + 1] - bp[j]);
  }
  return PwlConcave(std::move(bp), std::move(sl), offset);
}

PwlConcave pwl_sum(std::span<const PwlConcave> fs) {
  if (fs.empty()) {
    throw Error(ErrorCode::kInvalidPwl, "pwl_sum of an empty sequence");
  }
  std::vector<double> merged;
  double offset = 0.0;
  for (const auto& f : fs) {
    merged.insert(merged.end(), f.breakpoints().begin(), f.breakpoints().end());
    offset += f.offset();
  }
  std::sort(merged.begin(), merged.end());
  std::vector<double> bp;
  for (double x : merged) {
    if (bp.empty() || x - bp.back() > kPwlMergeTol) bp.push_back(x);
  }

  std::vector<double> out_bp, out_sl;
  for (double x : bp) {
    double s = 0.0;
    for (const auto& f : fs) s += slope_at(f, x);
    if (!out_sl.empty() && std::abs(out_sl.back() - s) <= kPwlMergeTol) {
      continue;
    }
    out_bp.push_back(x);
    out_sl.push_back(s);
  }
  // The final slope of every summand is exactly zero, so is the sum's.
  out_sl.back() = 0.0;
  return PwlConcave(std::move(out_bp), std::move(out_sl), offset);
}

PwlConcave pwl_supconv(std::span<const PwlConcave> fs) {
  if (fs.empty()) {
    throw Error(ErrorCode::kInvalidPwl, "pwl_supconv of an empty sequence");
  }
  std::vector<PwlConcave> conjugates;
  conjugates.reserve(fs.size());
  for (const auto& f : fs) conjugates.push_back(pwl_conjugate(f));
  return pwl_conjugate(pwl_sum(conjugates));
}

std::vector<double> pwl_apportion(std::span<const PwlConcave> members,
                                  double x_star) {
  if (x_star < 0.0) {
    throw Error(ErrorCode::kDomainError, "pwl_apportion needs x_star >= 0");
  }
  struct Segment {
    double slope;
    double length;
    std::size_t member;
  };
  std::vector<Segment> segments;
  for (std::size_t k = 0; k < members.size(); ++k) {
    const auto& c = members[k].breakpoints();
    const auto& m = members[k].slopes();
    for (std::size_t b = 0; b + 1 < c.size(); ++b) {
      segments.push_back({m[b], c[b + 1] - c[b], k});
    }
  }
  // Stable sort keeps (member, segment) order among equal slopes.
  std::stable_sort(segments.begin(), segments.end(),
                   [](const Segment& a, const Segment& b) {
                     return a.slope > b.slope;
                   });

  std::vector<double> rates(members.size(), 0.0);
  double remaining = x_star;
  for (const auto& seg : segments) {
    if (remaining <= 0.0) break;
    const double take = std::min(remaining, seg.length);
    rates[seg.member] += take;
    remaining -= take;
  }
  return rates;
}

}  // namespace numflow
