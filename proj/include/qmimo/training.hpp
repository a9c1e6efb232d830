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

#ifndef QMIMO_TRAINING_HPP_
#define QMIMO_TRAINING_HPP_

#include <vector>

#include <Eigen/Dense>

#include "qmimo/channel.hpp"
#include "qmimo/labels.hpp"

namespace qmimo {

// kFull trains every label L_t times; kSubspace trains only the generator
// block (K/2 or K/4 labels) and fills the rest through the symmetry.
enum class TrainingMode { kFull, kSubspace };

TrainingMode training_mode_from_string(const std::string& name);
const char* to_string(TrainingMode m);

// Block-repetition schedule: slot n carries label trained[n] =
// floor(n / l_t) over the trained block.
struct TrainingPlan {
  TrainingMode mode = TrainingMode::kFull;
  int l_t = 1;
  int t_t = 0;
  std::vector<int> trained;
};

TrainingPlan make_training_plan(const LabelSet& ls, int l_t, TrainingMode mode);

// One representative vector per label plus the sample sets it came from.
// sets/counts stay empty on paths that never collect samples (exact
// representatives, k-means updates).
struct RepresentativeSet {
  Eigen::MatrixXcd centroids;  // nr x K
  std::vector<std::vector<Eigen::VectorXcd>> sets;
  std::vector<long> counts;

  int K() const { return static_cast<int>(centroids.cols()); }
  void refresh_centroids();  // centroid k = mean of sets[k]
};

// Per-label averages of the training slots. Subspace mode assigns each
// untrained label the transformed copies (-y, +-jy) of its generator's
// samples, so every count is at least l_t and the centroids satisfy the
// symmetry exactly.
RepresentativeSet estimate_representatives(const BlockObservation& obs,
                                           const TrainingPlan& plan,
                                           const LabelSet& ls);

// Noise-free-limit representatives of the sign (1-bit) front end on the
// +-1 +- j scale: 2 Phi(sqrt(2 rho / nt) g) - (1 + j), applied per real
// dimension of g = H x_k. Rejects bits != 1.
RepresentativeSet exact_representatives_1bit(const Eigen::MatrixXcd& H,
                                             const LabelSet& ls,
                                             const NoiseSpec& noise, int bits);

}  // namespace qmimo

#endif  // QMIMO_TRAINING_HPP_
