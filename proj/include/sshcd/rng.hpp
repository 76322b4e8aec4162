// Copyright 2026 the sshcd authors
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

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace sshcd {

// splitmix64; bit-exact across platforms, unlike std:: distributions.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform on [-sigma, sigma].
  double symmetric(double sigma) { return uniform(-sigma, sigma); }

  /// +1 or -1 with equal probability.
  double rademacher() { return (next_u64() >> 63) ? 1.0 : -1.0; }

 private:
  std::uint64_t state_;
};

/// Deterministic seed fan-out: sub-seed = fold(master, tag, indices...).
/// The tag is FNV-1a hashed, indices are mixed in one splitmix step each,
/// so partial reruns of any tagged sub-stream reproduce exactly.
inline std::uint64_t fold_seed(std::uint64_t master, std::string_view tag,
                               std::initializer_list<std::uint64_t> indices = {}) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : tag) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  RngStream mix(master ^ h);
  std::uint64_t s = mix.next_u64();
  for (std::uint64_t idx : indices) {
    RngStream step(s ^ (idx + 0x9e3779b97f4a7c15ULL));
    s = step.next_u64();
  }
  return s;
}

}  // namespace sshcd
