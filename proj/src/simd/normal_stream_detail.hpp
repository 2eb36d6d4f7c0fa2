// Copyright 2026 The vqopt Authors
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

// Scalar lane helpers for NormalStream. Not to be included from translation
// units compiled with extended instruction sets: inline functions here must
// only ever be emitted as baseline code.

#include <bit>
#include <cstdint>

namespace vqopt::simd::detail {

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

/// xoshiro256++ step for one lane of the interleaved state.
inline std::uint64_t xoshiro_next(std::uint64_t (&s)[16], int lane) {
  std::uint64_t& s0 = s[0 * 4 + lane];
  std::uint64_t& s1 = s[1 * 4 + lane];
  std::uint64_t& s2 = s[2 * 4 + lane];
  std::uint64_t& s3 = s[3 * 4 + lane];
  const std::uint64_t result = rotl(s0 + s3, 23) + s0;
  const std::uint64_t t = s1 << 17;
  s2 ^= s0;
  s3 ^= s1;
  s1 ^= s2;
  s0 ^= s3;
  s2 ^= t;
  s3 = rotl(s3, 45);
  return result;
}

/// Top 52 bits as the mantissa of a double in [1, 2).
inline double unit_interval_from_bits(std::uint64_t bits) {
  return std::bit_cast<double>((bits >> 12) | 0x3FF0000000000000ULL);
}

}  // namespace vqopt::simd::detail
