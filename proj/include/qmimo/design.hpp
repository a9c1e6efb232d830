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

#ifndef QMIMO_DESIGN_HPP_
#define QMIMO_DESIGN_HPP_

#include <cstdint>
#include <vector>

#include "qmimo/labels.hpp"

namespace qmimo {

struct DesignResult {
  std::vector<int> subset;  // sorted label indices into the full set
  int d_min = 0;
  bool negation_closed = false;
};

// Smallest pairwise Hamming distance between the stacked real labels of the
// subset. Rejects subsets with duplicate vectors (distance 0).
int subset_d_min(const Eigen::MatrixXd& real_labels,
                 const std::vector<int>& subset);

// True when the subset is closed under negation of the transmit vectors.
bool negation_closed(const LabelSet& ls, const std::vector<int>& subset);

// Exact max-min-distance subset by lexicographic enumeration of all
// C(K, k_tilde) combinations; first optimum wins. Refuses to enumerate more
// than cap combinations.
DesignResult exhaustive_design(const LabelSet& ls, int k_tilde,
                               std::uint64_t cap = 10000000);

// Local search: from a random subset, scan member/non-member swaps in index
// order, take the first swap that strictly raises d_min, repeat until no
// swap improves; best result over `restarts` independent starts (stream
// (seed, restart, design), ties to the earliest restart).
DesignResult greedy_design(const LabelSet& ls, int k_tilde, int restarts,
                           std::uint64_t seed);

}  // namespace qmimo

#endif  // QMIMO_DESIGN_HPP_
