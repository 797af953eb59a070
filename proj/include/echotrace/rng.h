// Copyright 2026 The echotrace Authors.
//
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

#ifndef ECHOTRACE_RNG_H_
#define ECHOTRACE_RNG_H_

#include <cmath>
#include <cstdint>
#include <string>

#include "echotrace/common.h"

namespace echotrace {

// PCG32 generator (O'Neill). Used instead of <random> engines so that
// streams are reproducible bit-for-bit across platforms and standard library
// versions; every simulation RNG stream derives from (seed, stream id).
class Pcg32 {
 public:
  explicit Pcg32(uint64_t seed = 0x853c49e6748fea9bULL, uint64_t stream = 1) {
    state_ = 0u;
    inc_ = (stream << 1u) | 1u;
    NextUInt32();
    state_ += seed;
    NextUInt32();
  }

  uint32_t NextUInt32() {
    uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    uint32_t xorshifted = static_cast<uint32_t>(((old >> 18u) ^ old) >> 27u);
    uint32_t rot = static_cast<uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
  }

  // Uniform in [0, 1).
  double NextDouble() {
    return NextUInt32() * (1.0 / 4294967296.0);
  }

  // Uniform integer in [0, n).
  uint32_t NextBelow(uint32_t n) {
    return static_cast<uint32_t>(NextDouble() * n) % n;
  }

  // Standard normal via Box-Muller; the pair's second value is cached.
  double NextGaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = NextDouble();
    double u2 = NextDouble();
    if (u1 < 1e-300) u1 = 1e-300;
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * kPi * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  // Uniform direction on the unit sphere.
  Vec3 NextUnitVector() {
    double z = 1.0 - 2.0 * NextDouble();
    double phi = 2.0 * kPi * NextDouble();
    double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return Vec3(s * std::cos(phi), s * std::sin(phi), z);
  }

 private:
  uint64_t state_ = 0;
  uint64_t inc_ = 0;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// splitmix64, used to whiten compound seeds before constructing streams.
inline uint64_t MixSeed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t CombineSeed(uint64_t seed, uint64_t salt) {
  return MixSeed(seed ^ MixSeed(salt));
}

// FNV-1a, used where string-derived seeds must not depend on the platform's
// std::hash implementation.
inline uint64_t HashString(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace echotrace

#endif  // ECHOTRACE_RNG_H_
