// Copyright 2026 The metriq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace metriq {

namespace detail {
// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Counter-based random stream: draw k is a pure function of
/// (seed, stream_id, k), so shots can be evaluated in any order.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  std::uint64_t bits(std::uint64_t counter) const {
    const std::uint64_t key = detail::mix64(seed ^ detail::mix64(stream_id ^ 0x6a09e667f3bcc909ULL));
    return detail::mix64(key ^ detail::mix64(counter));
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  /// Two independent standard normals (Box-Muller on draws 2k, 2k+1).
  std::pair<double, double> gaussian_pair(std::uint64_t k) const {
    const double u1 = 1.0 - uniform(2 * k);  // (0, 1]
    const double u2 = uniform(2 * k + 1);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

  /// Independent child stream, e.g. one per tomography input.
  RngStream substream(std::uint64_t k) const {
    return {seed, detail::mix64(stream_id + 0x3c6ef372fe94f82bULL * (k + 1))};
  }

  friend bool operator==(const RngStream&, const RngStream&) = default;
};

}  // namespace metriq
