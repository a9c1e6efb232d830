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

#ifndef QMIMO_FRAMING_HPP_
#define QMIMO_FRAMING_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "qmimo/labels.hpp"

namespace qmimo {

// CRC-24, generator z^24 + z^23 + z^14 + z^12 + z^8 + 1 (0x805101).
// Plain long division: zero-initialized register, MSB-first, no reflection,
// no final XOR. The generator has an even number of terms, so every
// odd-weight error pattern is detected.
inline constexpr std::uint32_t kCrc24Poly = 0x805101;
inline constexpr int kCrc24Width = 24;

// Remainder of bits * z^24 modulo the generator; bits are 0/1, MSB first.
std::uint32_t crc24(std::span<const std::uint8_t> bits);

// True when the codeword (data followed by its 24 check bits) has
// remainder zero.
bool crc24_verify(std::span<const std::uint8_t> codeword);

// Splits a data block of t_d slots into S equal segments of
// l_data + l_crc bits, each an integer number of transmit vectors.
struct SegmentPlan {
  int l_data = 16;
  int l_crc = kCrc24Width;
  int bits_per_vector = 0;
  int segments = 0;           // S
  int slots_per_segment = 0;

  SegmentPlan(int t_d, int bits_per_vector, int l_data, int l_crc);

  int segment_bits() const { return l_data + l_crc; }
};

// data_bits (S * l_data of them) -> per-slot label indices (t_d of them):
// each segment is data || crc24(data), chopped MSB-first into
// bits_per_vector groups.
std::vector<int> frame_segments(std::span<const std::uint8_t> data_bits,
                                const SegmentPlan& plan, const LabelSet& ls);

// Bits carried by a sequence of slots, MSB-first per label.
std::vector<std::uint8_t> slot_bits(std::span<const int> slot_labels,
                                    const LabelSet& ls);

// Inverse of frame_segments: concatenated data bits, check bits stripped.
std::vector<std::uint8_t> deframe_data_bits(std::span<const int> slot_labels,
                                            const SegmentPlan& plan,
                                            const LabelSet& ls);

// CRC check of one detected segment (slots_per_segment label indices).
bool verify_segment(std::span<const int> segment_labels,
                    const SegmentPlan& plan, const LabelSet& ls);

}  // namespace qmimo

#endif  // QMIMO_FRAMING_HPP_
