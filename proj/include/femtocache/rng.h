// Copyright 2026 The Authors.
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

#ifndef FEMTOCACHE_RNG_H_
#define FEMTOCACHE_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace femtocache {

// Seed derivation: a root seed plus a path of stream coordinates (experiment
// point, replication, purpose, ...) is folded through splitmix64. Streams for
// replication k depend only on k, so adding replications never perturbs the
// streams of earlier ones.
std::uint64_t SplitMix64(std::uint64_t x);
std::uint64_t DeriveSeed(std::uint64_t root,
                         std::initializer_list<std::uint64_t> path);

// Stable stream-purpose tags.
enum class StreamTag : std::uint64_t {
  kUsers = 1,
  kHelpers = 2,
  kRequests = 3,
  kCaches = 4,
  kTrace = 5,
  kPlacement = 6,
};

// A single exclusive random stream. Draws are produced from the raw 64-bit
// mt19937_64 output so sequences are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

  // Uniform integer in [0, n). Unbiased (rejection on the top range). n > 0.
  std::uint64_t UniformInt(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace femtocache

#endif  // FEMTOCACHE_RNG_H_
