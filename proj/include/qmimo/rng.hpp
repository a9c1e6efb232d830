// Copyright 2026 The qmimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QMIMO_RNG_HPP_
#define QMIMO_RNG_HPP_

#include <cmath>
#include <complex>
#include <cstdint>

namespace qmimo {

// Independent draw streams. Every (seed, trial, stream) triple yields its own
// counter sequence, so trials can run on any number of workers in any order
// and still produce identical numbers.
enum class Stream : std::uint64_t {
  kChannel = 1,
  kNoise = 2,
  kData = 3,
  kDesign = 4,
};

// SplitMix64 run in counter mode: output_i = mix(key + i * gamma).
// The stream key is itself derived by mixing (seed, trial, stream).
class Rng {
 public:
  explicit Rng(std::uint64_t key) : state_(key) {}

  Rng(std::uint64_t seed, std::uint64_t trial, Stream stream)
      : Rng(mix(mix(mix(seed) ^ trial) ^ static_cast<std::uint64_t>(stream))) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Unbiased-enough integer on [0, n): fixed-point multiply, bias < n / 2^64.
  std::uint64_t uniform_int(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] keeps the log finite.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Circularly symmetric complex normal, unit variance (1/2 per component).
  std::complex<double> cnormal() {
    const double s = 0.70710678118654752440084436210485;
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace qmimo

#endif  // QMIMO_RNG_HPP_
