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

#include "qmimo/framing.hpp"

#include <stdexcept>

namespace qmimo {

std::uint32_t crc24(std::span<const std::uint8_t> bits) {
  std::uint32_t r = 0;
  for (std::uint8_t bit : bits) {
    const std::uint32_t fb = ((r >> 23) & 1u) ^ (bit & 1u);
    r = (r << 1) & 0xFFFFFFu;
    if (fb) r ^= kCrc24Poly;
  }
  return r;
}

bool crc24_verify(std::span<const std::uint8_t> codeword) {
  if (codeword.size() < static_cast<std::size_t>(kCrc24Width)) {
    throw std::invalid_argument("codeword shorter than the check field");
  }
  // Remainder of data * z^24 equals the check bits iff division of the
  // whole codeword (data * z^24 + check) leaves zero.
  const std::size_t n = codeword.size() - kCrc24Width;
  std::uint32_t r = crc24(codeword.first(n));
  for (std::size_t i = 0; i < static_cast<std::size_t>(kCrc24Width); ++i) {
    r ^= static_cast<std::uint32_t>(codeword[n + i] & 1u)
         << (kCrc24Width - 1 - i);
  }
  return r == 0;
}

SegmentPlan::SegmentPlan(int t_d, int bits_per_vector_, int l_data_,
                         int l_crc_)
    : l_data(l_data_), l_crc(l_crc_), bits_per_vector(bits_per_vector_) {
  if (t_d < 1 || bits_per_vector < 1 || l_data < 1 || l_crc < 1) {
    throw std::invalid_argument("segment plan: all sizes must be positive");
  }
  if (l_crc != kCrc24Width) {
    throw std::invalid_argument("segment plan: check field must be 24 bits");
  }
  const long total = static_cast<long>(t_d) * bits_per_vector;
  if (segment_bits() % bits_per_vector != 0) {
    throw std::invalid_argument(
        "segment length must be a whole number of transmit vectors");
  }
  if (total % segment_bits() != 0) {
    throw std::invalid_argument(
        "data block does not divide into whole segments");
  }
  segments = static_cast<int>(total / segment_bits());
  slots_per_segment = segment_bits() / bits_per_vector;
}

std::vector<int> frame_segments(std::span<const std::uint8_t> data_bits,
                                const SegmentPlan& plan, const LabelSet& ls) {
  if (ls.bits_per_vector != plan.bits_per_vector) {
    throw std::invalid_argument("plan and label set disagree on vector bits");
  }
  if (data_bits.size() !=
      static_cast<std::size_t>(plan.segments) * plan.l_data) {
    throw std::invalid_argument("wrong number of data bits");
  }
  std::vector<int> slots;
  slots.reserve(static_cast<std::size_t>(plan.segments) *
                plan.slots_per_segment);
  std::vector<std::uint8_t> seg(plan.segment_bits());
  for (int s = 0; s < plan.segments; ++s) {
    const auto data = data_bits.subspan(
        static_cast<std::size_t>(s) * plan.l_data, plan.l_data);
    std::copy(data.begin(), data.end(), seg.begin());
    const std::uint32_t check = crc24(data);
    for (int i = 0; i < plan.l_crc; ++i) {
      seg[plan.l_data + i] = (check >> (plan.l_crc - 1 - i)) & 1u;
    }
    for (int v = 0; v < plan.slots_per_segment; ++v) {
      std::uint32_t pattern = 0;
      for (int b = 0; b < plan.bits_per_vector; ++b) {
        pattern = (pattern << 1) | seg[v * plan.bits_per_vector + b];
      }
      slots.push_back(ls.label_from_bits(pattern));
    }
  }
  return slots;
}

std::vector<std::uint8_t> slot_bits(std::span<const int> slot_labels,
                                    const LabelSet& ls) {
  std::vector<std::uint8_t> bits;
  bits.reserve(slot_labels.size() * ls.bits_per_vector);
  for (int k : slot_labels) {
    const std::uint32_t pattern = ls.label_bits(k);
    for (int b = ls.bits_per_vector - 1; b >= 0; --b) {
      bits.push_back((pattern >> b) & 1u);
    }
  }
  return bits;
}

std::vector<std::uint8_t> deframe_data_bits(std::span<const int> slot_labels,
                                            const SegmentPlan& plan,
                                            const LabelSet& ls) {
  if (slot_labels.size() != static_cast<std::size_t>(plan.segments) *
                                plan.slots_per_segment) {
    throw std::invalid_argument("wrong number of slots");
  }
  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(plan.segments) * plan.l_data);
  for (int s = 0; s < plan.segments; ++s) {
    const auto seg = slot_labels.subspan(
        static_cast<std::size_t>(s) * plan.slots_per_segment,
        plan.slots_per_segment);
    const std::vector<std::uint8_t> bits = slot_bits(seg, ls);
    out.insert(out.end(), bits.begin(), bits.begin() + plan.l_data);
  }
  return out;
}

bool verify_segment(std::span<const int> segment_labels,
                    const SegmentPlan& plan, const LabelSet& ls) {
  if (segment_labels.size() !=
      static_cast<std::size_t>(plan.slots_per_segment)) {
    throw std::invalid_argument("segment has the wrong number of slots");
  }
  return crc24_verify(slot_bits(segment_labels, ls));
}

}  // namespace qmimo
