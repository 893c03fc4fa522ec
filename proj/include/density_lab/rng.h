// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace density_lab {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t splitmix64(std::uint64_t x);

/// Portable seeded generator: std::mt19937_64 whose 64-bit seed is
/// splitmix64(seed + stream * 0x9E3779B97F4A7C15). Uniform and normal
/// variates are derived here rather than through <random> distributions,
/// whose output is implementation-defined, so sequences match across
/// standard libraries.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }
  /// Top 53 bits scaled into [0, 1).
  double uniform();
  /// Box-Muller cosine branch, consuming two uniforms per variate.
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace density_lab
