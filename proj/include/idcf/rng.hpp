/*
   Copyright 2026 The idcf Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <limits>

namespace idcf {

/// Counter-based, splittable pseudorandom stream.
///
/// A stream is a 64-bit key. Its i-th output (i = 0, 1, ...) is
///
///     mix64(key + (i + 1) * 0x9E3779B97F4A7C15)
///
/// where mix64 is the SplitMix64 finalizer. Outputs are a pure function of
/// (key, i), so any element can be computed without generating its
/// predecessors. `split(id)` derives a child key
///
///     mix64(key ^ mix64(id * 0xD1B54A32D192ED03 + 0x8BB84B93962EACC9))
///
/// and the root key for a user seed is mix64(seed ^ 0x5851F42D4C957F2D).
/// Everything is unsigned 64-bit arithmetic, so streams are identical on all
/// platforms and independent of scheduling.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t seed) : key_(mix64(seed ^ kSeedSalt)) {}

  static Stream from_key(std::uint64_t key) {
    Stream s(0);
    s.key_ = key;
    return s;
  }

  [[nodiscard]] Stream split(std::uint64_t id) const {
    return from_key(mix64(key_ ^ mix64(id * kSplitMul + kSplitAdd)));
  }

  [[nodiscard]] std::uint64_t key() const { return key_; }
  [[nodiscard]] std::uint64_t position() const { return counter_; }

  /// Output at an absolute counter position; does not advance the stream.
  [[nodiscard]] std::uint64_t at(std::uint64_t counter) const {
    return mix64(key_ + (counter + 1) * kGolden);
  }

  std::uint64_t next() { return at(counter_++); }
  std::uint64_t operator()() { return next(); }

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() {
    return std::numeric_limits<std::uint64_t>::max();
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as a logarithm argument.
  double uniform_pos() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound) by 128-bit multiply-high.
  std::uint64_t below(std::uint64_t bound) {
    const unsigned __int128 prod =
        static_cast<unsigned __int128>(next()) * bound;
    return static_cast<std::uint64_t>(prod >> 64);
  }

  static constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kSeedSalt = 0x5851F42D4C957F2DULL;
  static constexpr std::uint64_t kSplitMul = 0xD1B54A32D192ED03ULL;
  static constexpr std::uint64_t kSplitAdd = 0x8BB84B93962EACC9ULL;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace idcf
