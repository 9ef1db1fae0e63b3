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

#include <cstdint>

namespace numflow {

// SplitMix64. Every random quantity in instance generation is drawn from this
// generator so that sequences are reproducible bit-for-bit in any language:
//
//   state  <- state + 0x9E3779B97F4A7C15            (mod 2^64)
//   z      <- state
//   z      <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9  (mod 2^64)
//   z      <- (z ^ (z >> 27)) * 0x94D049BB133111EB  (mod 2^64)
//   output <- z ^ (z >> 31)
//
// Derived draws:
//   uniform_open01()     = ((output >> 11) + 0.5) * 2^-53, strictly in (0, 1)
//   uniform_index(n)     = floor(output * n / 2^64)   (128-bit product)
//   uniform_int(lo, hi)  = lo + uniform_index(hi - lo + 1)
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  double uniform_open01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t uniform_index(std::uint64_t n) {
    const unsigned __int128 product =
        static_cast<unsigned __int128>(next()) * n;
    return static_cast<std::uint64_t>(product >> 64);
  }

  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    uniform_index(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform_open01();
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

// Per-experiment-point seed: mix(base + kGamma * (n + 1)). Adding points to
// an experiment never changes the seeds of the existing ones.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t n) {
  return SplitMix64::mix(base + SplitMix64::kGamma * (n + 1));
}

}  // namespace numflow
