// SPDX-License-Identifier: Apache-2.0
//
// cogwpt: cognitive multi-antenna wireless power transfer beamforming
// Copyright (C) 2026 The cogwpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "cogwpt/common.hpp"

namespace cogwpt {

/// Counter-based random source built on the SplitMix64 finalizer.
///
/// Every draw is a pure function of (seed, stream, counter), so a channel entry
/// can be regenerated in isolation and any reimplementation can reproduce
/// fixtures from this description alone:
///
///   key  = splitmix64(splitmix64(seed) ^ splitmix64(stream * 2^32 + counter))
///   u    = ((key >> 11) + 0.5) * 2^-53          uniform on (0, 1)
///
/// where splitmix64(x) adds 0x9E3779B97F4A7C15 and applies the standard
/// (30, 27, 31) xor-shift-multiply finalizer.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_key_(splitmix64(seed)) {}

  static constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  std::uint64_t bits(std::uint32_t stream, std::uint32_t counter) const {
    const std::uint64_t c = (static_cast<std::uint64_t>(stream) << 32) | counter;
    return splitmix64(seed_key_ ^ splitmix64(c));
  }

  double uniform(std::uint32_t stream, std::uint32_t counter) const {
    return (static_cast<double>(bits(stream, counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Unit-variance circularly symmetric complex Gaussian (E|z|^2 = 1) via
  /// Box-Muller on counters 2k and 2k+1.
  Complex unit_cscg(std::uint32_t stream, std::uint32_t k) const {
    const double u1 = uniform(stream, 2 * k);
    const double u2 = uniform(stream, 2 * k + 1);
    const double r = std::sqrt(-std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

 private:
  std::uint64_t seed_key_;
};

}  // namespace cogwpt
