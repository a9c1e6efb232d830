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

#ifndef QMIMO_LABELS_HPP_
#define QMIMO_LABELS_HPP_

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qmimo {

enum class Modulation { kBpsk, kQpsk, k8Psk, k8Qam, k16Qam };

Modulation modulation_from_string(const std::string& name);
const char* to_string(Modulation m);

// Unit-average-power constellation. points[b] is the symbol whose bit
// pattern is b (Gray mapping per real axis; BPSK bit 0 -> +1).
struct Constellation {
  Modulation name = Modulation::kBpsk;
  std::vector<std::complex<double>> points;
  int bits_per_symbol = 0;

  int size() const { return static_cast<int>(points.size()); }
};

Constellation build_constellation(Modulation m);

// Symmetry of the transmit-vector set:
//   kCond1 - closed under negation,
//   kCond2 - closed under multiplication by {-1, j, -j} (implies kCond1),
//   kNone  - neither.
enum class SymmetryCondition { kNone, kCond1, kCond2 };

const char* to_string(SymmetryCondition c);

SymmetryCondition detect_condition(const Constellation& c);

// All K transmit vectors over nt antennas, ordered so the symmetry is pure
// index arithmetic (1-based k in the formulas, 0-based here):
//   kCond1: labels[k + K/2] = -labels[k]                 for k < K/2
//   kCond2: labels[k + K/4] = -labels[k],
//           labels[k + K/2] = j*labels[k],
//           labels[k + 3K/4] = -j*labels[k]              for k < K/4
// The generator block is sorted lexicographically by per-antenna symbol
// indices (antenna 0 most significant).
class LabelSet {
 public:
  Eigen::MatrixXcd labels;  // nt x K, column k is transmit vector k
  SymmetryCondition condition = SymmetryCondition::kNone;
  int nt = 0;
  int K = 0;
  int generator_count = 0;  // K, K/2 or K/4 depending on condition
  int bits_per_vector = 0;

  Eigen::VectorXcd label(int k) const { return labels.col(k); }

  // Bit pattern carried by label k (MSB-first; antenna 0 occupies the most
  // significant symbol group for full sets, natural index for subsets).
  std::uint32_t label_bits(int k) const { return label_bits_[k]; }
  int label_from_bits(std::uint32_t bits) const;

  // Stacked real representation [Re; Im], length 2*nt.
  Eigen::VectorXd real_label(int k) const;
  Eigen::MatrixXd real_labels() const;  // 2*nt x K

  std::vector<std::uint32_t> label_bits_;
  std::vector<std::int32_t> bits_to_label_;
};

// Full transmit-vector set, K = M^nt. Rejects K > 2^20.
LabelSet enumerate_labels(const Constellation& c, int nt);

// Restriction to the given label indices. The subset is scanned for closure
// under negation / j-rotation; if closed, it is reordered to the convention
// above, otherwise the (sorted) order is kept and the condition is kNone.
// Bit patterns become natural indices; K must be a power of two.
LabelSet restrict_label_set(const LabelSet& full, std::vector<int> indices);

// Hamming distance between stacked real label vectors (entry counts as
// different when it differs by more than 1e-9).
int hamming_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace qmimo

#endif  // QMIMO_LABELS_HPP_
