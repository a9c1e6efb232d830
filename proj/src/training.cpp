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

#include "qmimo/training.hpp"

#include <cmath>
#include <stdexcept>

namespace qmimo {

TrainingMode training_mode_from_string(const std::string& name) {
  if (name == "full") return TrainingMode::kFull;
  if (name == "subspace") return TrainingMode::kSubspace;
  throw std::invalid_argument("unknown training mode: " + name);
}

const char* to_string(TrainingMode m) {
  return m == TrainingMode::kFull ? "full" : "subspace";
}

TrainingPlan make_training_plan(const LabelSet& ls, int l_t,
                                TrainingMode mode) {
  if (l_t < 1) throw std::invalid_argument("l_t must be positive");
  if (mode == TrainingMode::kSubspace &&
      ls.condition == SymmetryCondition::kNone) {
    throw std::invalid_argument(
        "subspace training needs a negation- or rotation-closed label set");
  }
  const int trained_labels =
      mode == TrainingMode::kFull ? ls.K : ls.generator_count;
  TrainingPlan plan;
  plan.mode = mode;
  plan.l_t = l_t;
  plan.t_t = trained_labels * l_t;
  plan.trained.resize(plan.t_t);
  for (int n = 0; n < plan.t_t; ++n) plan.trained[n] = n / l_t;
  return plan;
}

void RepresentativeSet::refresh_centroids() {
  for (int k = 0; k < K(); ++k) {
    if (sets[k].empty()) continue;
    Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(centroids.rows());
    for (const auto& v : sets[k]) sum += v;
    centroids.col(k) = sum / static_cast<double>(sets[k].size());
    counts[k] = static_cast<long>(sets[k].size());
  }
}

RepresentativeSet estimate_representatives(const BlockObservation& obs,
                                           const TrainingPlan& plan,
                                           const LabelSet& ls) {
  if (obs.t_t != plan.t_t) {
    throw std::invalid_argument("observation and plan disagree on t_t");
  }
  for (int n = 0; n < plan.t_t; ++n) {
    if (obs.transmitted[n] != plan.trained[n]) {
      throw std::invalid_argument("training slots do not follow the plan");
    }
  }

  RepresentativeSet reps;
  reps.centroids = Eigen::MatrixXcd::Zero(obs.y.rows(), ls.K);
  reps.sets.resize(ls.K);
  reps.counts.assign(ls.K, 0);
  for (int n = 0; n < plan.t_t; ++n) {
    reps.sets[plan.trained[n]].push_back(obs.y.col(n));
  }

  if (plan.mode == TrainingMode::kSubspace) {
    const std::complex<double> j{0.0, 1.0};
    const int g = ls.generator_count;
    for (int k = 0; k < g; ++k) {
      for (const auto& y : reps.sets[k]) {
        if (ls.condition == SymmetryCondition::kCond1) {
          reps.sets[k + ls.K / 2].push_back(-y);
        } else {
          reps.sets[k + ls.K / 4].push_back(-y);
          reps.sets[k + ls.K / 2].push_back(j * y);
          reps.sets[k + 3 * ls.K / 4].push_back(-j * y);
        }
      }
    }
  }

  for (int k = 0; k < ls.K; ++k) {
    if (reps.sets[k].empty()) {
      throw std::invalid_argument("label without training samples");
    }
  }
  reps.refresh_centroids();
  return reps;
}

RepresentativeSet exact_representatives_1bit(const Eigen::MatrixXcd& H,
                                             const LabelSet& ls,
                                             const NoiseSpec& noise,
                                             int bits) {
  if (bits != 1) {
    throw std::invalid_argument("exact representatives exist only for b = 1");
  }
  if (H.cols() != ls.nt) {
    throw std::invalid_argument("channel width does not match label set");
  }
  // 2 Phi(x) - 1 = erf(x / sqrt(2)); the scale sqrt(2 rho / nt) = sqrt(2/n0).
  const double scale = std::sqrt(2.0 / noise.n0) * M_SQRT1_2;
  RepresentativeSet reps;
  reps.centroids.resize(H.rows(), ls.K);
  reps.sets.resize(ls.K);
  reps.counts.assign(ls.K, 0);
  Eigen::VectorXcd g(H.rows());
  for (int k = 0; k < ls.K; ++k) {
    g.noalias() = H * ls.labels.col(k);
    for (int i = 0; i < H.rows(); ++i) {
      reps.centroids(i, k) = {std::erf(scale * g[i].real()),
                              std::erf(scale * g[i].imag())};
    }
  }
  return reps;
}

}  // namespace qmimo
