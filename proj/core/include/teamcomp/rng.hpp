// Copyright 2026 The teamcomp Authors.
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

#ifndef TEAMCOMP_RNG_HPP_
#define TEAMCOMP_RNG_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace teamcomp {

// Seedable generator with a platform-stable stream.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. The standard distributions are not, so bounded integers and
// reals are derived here from raw engine output: integers by rejection
// sampling, reals from the top 53 bits. Same seed, same stream, on every
// conforming toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform integer in [0, bound). Requires bound > 0.
  std::uint64_t Below(std::uint64_t bound);

  // Uniform real in [0, 1).
  double Uniform01();

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

  bool Bernoulli(double p) { return Uniform01() < p; }

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(Below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  // Seed for an independent sub-stream, via splitmix64 of (seed, stream).
  static std::uint64_t Derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
};

}  // namespace teamcomp

#endif  // TEAMCOMP_RNG_HPP_
