// Copyright 2026 The dsyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DSYN_RANDOM_H_
#define DSYN_RANDOM_H_

#include <cstdint>
#include <limits>
#include <random>

namespace dsyn {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Seeded generator with distribution helpers implemented on top of the raw
// 64-bit engine output, so that draws are identical across standard library
// implementations (std::*_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for (seed, stream). Used to give every worker, fold
  // and mechanism attempt its own generator so results do not depend on
  // scheduling.
  static Rng stream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

  // Laplace(0, scale). scale == 0 returns 0; scale == inf is not allowed.
  double laplace(double scale);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace dsyn

#endif  // DSYN_RANDOM_H_
