// Copyright 2026 The Research Space Authors.
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

#ifndef RSPACE_RANDOM_HPP
#define RSPACE_RANDOM_HPP

#include <cstdint>
#include <random>
#include <span>

namespace rspace {

/// std::mt19937_64 seeded directly, with in-house distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniform integer on [0, n); n > 0. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n);
  /// Uniform integer on [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  /// Knuth's multiplication method; intended for small means.
  int poisson(double mean);
  /// Index drawn with probability proportional to weights (all >= 0, sum > 0).
  std::size_t weighted_index(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

}  // namespace rspace

#endif  // RSPACE_RANDOM_HPP
