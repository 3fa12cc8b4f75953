// Copyright 2026 The dpbench Authors
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

#include "dpbench/rng.hpp"

#include <limits>
#include <stdexcept>

namespace dpbench {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t combine_stream(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x8C67E3B2D1F05A9BULL;
  for (std::uint64_t p : parts) h = mix64(h ^ p);
  return h;
}

std::uint64_t combine_stream(const std::vector<std::uint64_t>& parts) {
  std::uint64_t h = 0x8C67E3B2D1F05A9BULL;
  for (std::uint64_t p : parts) h = mix64(h ^ p);
  return h;
}

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id),
      engine_(mix64(mix64(seed) ^ stream_id)) {}

double SeededRng::uniform() {
  // 53 top bits -> [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRng::uniform_open() {
  double u = uniform();
  return u > 0.0 ? u : 0x1.0p-53;
}

double SeededRng::uniform_range(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

std::size_t SeededRng::uniform_index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be > 0");
  const std::uint64_t bound = n;
  // Rejection sampling over the largest multiple of n that fits in 64 bits.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

SeededRng SeededRng::derive(std::string_view purpose) const {
  return SeededRng(seed_, combine_stream({stream_id_, fnv1a64(purpose)}));
}

SeededRng SeededRng::derive(std::uint64_t salt) const {
  return SeededRng(seed_, combine_stream({stream_id_, salt}));
}

}  // namespace dpbench
