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

#ifndef QMIMO_DETECT_HPP_
#define QMIMO_DETECT_HPP_

#include <vector>

#include <Eigen/Dense>

#include "qmimo/channel.hpp"
#include "qmimo/framing.hpp"
#include "qmimo/labels.hpp"
#include "qmimo/training.hpp"

namespace qmimo {

// Index of the centroid nearest to each column of y (squared Euclidean
// distance, ties to the smallest index).
std::vector<int> nearest_centroids(const Eigen::MatrixXcd& y,
                                   const Eigen::MatrixXcd& centroids);

int mcd_detect(const Eigen::VectorXcd& y, const RepresentativeSet& reps);

// Per-slot cluster index; rows of the implied indicator matrix are one-hot.
struct Assignment {
  std::vector<int> cluster;

  bool operator==(const Assignment&) const = default;
};

// Nearest-centroid assignment over the whole block, except that training
// slots are pinned to the labels they are known to carry.
Assignment assign_clusters(const BlockObservation& obs,
                           const RepresentativeSet& reps,
                           const TrainingPlan& plan);

// Symmetry-constrained least-squares centroid update. Under kCond1 the
// pair (k, k+K/2) shares one parameter; under kCond2 the quadruple shares
// one. A group with no members keeps its previous centroid. kNone is the
// plain per-cluster mean and must be requested explicitly.
Eigen::MatrixXcd update_centroids(const Eigen::MatrixXcd& y,
                                  const Assignment& assignment,
                                  SymmetryCondition condition,
                                  const Eigen::MatrixXcd& previous);

struct DecodeResult {
  std::vector<int> decoded;            // one label per data slot
  std::vector<std::uint8_t> segment_pass;
  int iterations = 0;
  RepresentativeSet reps;              // final representatives
  std::vector<double> objective;       // clustering objective per iteration
  std::vector<std::vector<int>> per_iteration;  // decoded after each iteration
};

// Plain minimum-centroid-distance detection of the data slots.
DecodeResult mcd_decode(const BlockObservation& obs,
                        const RepresentativeSet& reps);

// CRC-driven refinement: segments whose CRC passes donate their slots (and
// the symmetry-transformed copies) to the sample sets, centroids are
// re-averaged, and the remaining segments are detected again. Stops when a
// sweep over the unresolved segments produces no new pass, everything has
// passed, or S+1 sweeps have run.
DecodeResult supervised_decode(const BlockObservation& obs,
                               const TrainingPlan& plan,
                               const SegmentPlan& seg_plan, const LabelSet& ls,
                               RepresentativeSet reps);

// Constrained k-means over the whole block: assignment step with pinned
// training slots, symmetry-constrained update step, until the assignment
// repeats or iter_max rounds. iter_max = 1 reproduces mcd_decode. A label
// set without symmetry requires allow_unconstrained.
DecodeResult semisupervised_decode(const BlockObservation& obs,
                                   const TrainingPlan& plan,
                                   const LabelSet& ls, RepresentativeSet reps,
                                   int iter_max,
                                   bool allow_unconstrained = false);

}  // namespace qmimo

#endif  // QMIMO_DETECT_HPP_
