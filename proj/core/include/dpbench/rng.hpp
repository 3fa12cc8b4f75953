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

#ifndef DPBENCH_RNG_HPP
#define DPBENCH_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace dpbench {

/// splitmix64 finalizer; used to turn (seed, stream_id) pairs into engine seeds.
std::uint64_t mix64(std::uint64_t x);

/// FNV-1a over a byte string; used to hash purpose tags into stream components.
std::uint64_t fnv1a64(std::string_view s);

/// Folds a path of components into a single stream id. Order-sensitive.
std::uint64_t combine_stream(std::initializer_list<std::uint64_t> parts);
std::uint64_t combine_stream(const std::vector<std::uint64_t>& parts);

/// Seeded random stream. Identical (seed, stream_id) pairs reproduce the
/// exact same draw sequence; distinct stream_ids give independent streams.
/// All randomness in the project flows through streams derived from a master
/// seed, which is what makes parallel sweeps reproducible.
class SeededRng {
 public:
  SeededRng(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform();

  /// Uniform double in the open interval (0, 1); safe for inverse-CDF use.
  double uniform_open();

  /// Uniform draw in [lo, hi).
  double uniform_range(double lo, double hi);

  /// Unbiased uniform index in [0, n). n must be > 0.
  std::size_t uniform_index(std::size_t n);

  /// Fisher-Yates shuffle. Hand-rolled so results do not depend on the
  /// standard library's std::shuffle implementation.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  /// New independent stream addressed from this stream's identity (not from
  /// its current state), so derivation order never affects reproducibility.
  SeededRng derive(std::string_view purpose) const;
  SeededRng derive(std::uint64_t salt) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace dpbench

#endif  // DPBENCH_RNG_HPP
