// Copyright 2026 The argraph Authors
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

#pragma once

#include <cmath>
#include <cstdint>

namespace argraph {

// Mixer used to derive independent stream seeds; output is a bijection of the
// input state, so distinct (seed, stream) pairs never collide on state zero.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Child seed for (master, index), independent of evaluation order.  The
// pre-mix input is distinct per index and splitmix64 is a bijection, so
// children of one master never collide.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t state = master + (index + 1) * 0x9e3779b97f4a7c15ULL;
  return splitmix64_next(state);
}

// Deterministic, platform-independent generator (xoshiro256++ core with a
// hand-rolled Box-Muller transform).  The standard library distributions are
// implementation-defined, which would break bitwise reproducibility across
// toolchains, so everything downstream of the raw 64-bit stream is explicit.
//
// Streams derived from the same seed but distinct stream ids are independent
// for practical purposes; Monte Carlo trials use stream = trial index so the
// result of a trial does not depend on scheduling order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t mix = seed;
    splitmix64_next(mix);
    mix ^= 0x5851f42d4c957f2dULL * (stream + 1);
    for (auto& word : state_) word = splitmix64_next(mix);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  // Standard normal via Box-Muller; u1 is kept in (0, 1] so the log is finite.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 =
        (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace argraph
