// Copyright 2026 The entnet Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

// Counter-based random numbers: every draw is a pure function of
// (seed, trial, slot, sensor, stream), so results do not depend on how trials
// are split across threads.

#include <cstdint>

namespace entnet {

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  constexpr explicit CounterRng(std::uint64_t seed) noexcept : key_(splitmix64(seed)) {}

  [[nodiscard]] constexpr std::uint64_t bits(std::uint64_t trial, std::uint64_t slot, std::uint64_t sensor,
                                             std::uint64_t stream = 0) const noexcept {
    std::uint64_t h = splitmix64(key_ ^ trial);
    h = splitmix64(h ^ slot);
    h = splitmix64(h ^ sensor);
    return splitmix64(h ^ stream);
  }

  /// Uniform on [0, 1) with 53 random bits.
  [[nodiscard]] constexpr double uniform(std::uint64_t trial, std::uint64_t slot, std::uint64_t sensor,
                                         std::uint64_t stream = 0) const noexcept {
    return static_cast<double>(bits(trial, slot, sensor, stream) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
};

}  // namespace entnet
