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

#include "qmimo/detect.hpp"

#include <numeric>
#include <stdexcept>

namespace qmimo {
namespace {

// argmin_k ||y_n - c_k||^2 = argmin_k (||c_k||^2 - 2 Re(c_k^H y_n)); the
// cross terms come from one GEMM. Scanning k upward keeps ties on the
// smallest index.
void nearest_into(const Eigen::MatrixXcd& y, const Eigen::MatrixXcd& c,
                  int* out) {
  const Eigen::VectorXd c2 = c.colwise().squaredNorm().real();
  const Eigen::MatrixXd cross = (c.adjoint() * y).real();
  for (Eigen::Index n = 0; n < y.cols(); ++n) {
    int best = 0;
    double best_score = c2[0] - 2.0 * cross(0, n);
    for (Eigen::Index k = 1; k < c.cols(); ++k) {
      const double score = c2[k] - 2.0 * cross(k, n);
      if (score < best_score) {
        best_score = score;
        best = static_cast<int>(k);
      }
    }
    out[n] = best;
  }
}

double objective(const Eigen::MatrixXcd& y, const Eigen::MatrixXcd& c,
                 const Assignment& a) {
  double j = 0.0;
  for (Eigen::Index n = 0; n < y.cols(); ++n) {
    j += (y.col(n) - c.col(a.cluster[n])).squaredNorm();
  }
  return j;
}

// Transformed copies a detected vector donates to the symmetric labels:
// (partner index, factor) pairs for label k.
std::vector<std::pair<int, std::complex<double>>> symmetry_partners(
    int k, int K, SymmetryCondition cond) {
  const std::complex<double> j{0.0, 1.0};
  switch (cond) {
    case SymmetryCondition::kNone:
      return {};
    case SymmetryCondition::kCond1:
      return {{(k + K / 2) % K, -1.0}};
    case SymmetryCondition::kCond2: {
      const int q = K / 4;
      const int quart = k / q;
      // Quartiles hold x, -x, jx, -jx; a vector near y = c_k contributes
      // -y to the negation partner, j y to the label at j x_k (whose
      // centroid is j c_k), and -j y to the label at -j x_k.
      int neg = 0, rotp = 0, rotm = 0;
      switch (quart) {
        case 0: neg = k + q; rotp = k + 2 * q; rotm = k + 3 * q; break;
        case 1: neg = k - q; rotp = k + 2 * q; rotm = k + q; break;
        case 2: neg = k + q; rotp = k - q; rotm = k - 2 * q; break;
        default: neg = k - q; rotp = k - 3 * q; rotm = k - 2 * q; break;
      }
      return {{neg, -1.0}, {rotp, j}, {rotm, -j}};
    }
  }
  return {};
}

}  // namespace

std::vector<int> nearest_centroids(const Eigen::MatrixXcd& y,
                                   const Eigen::MatrixXcd& c) {
  if (y.rows() != c.rows()) {
    throw std::invalid_argument("dimension mismatch");
  }
  if (c.cols() == 0) throw std::invalid_argument("no centroids");
  std::vector<int> out(y.cols());
  if (!out.empty()) nearest_into(y, c, out.data());
  return out;
}

int mcd_detect(const Eigen::VectorXcd& y, const RepresentativeSet& reps) {
  return nearest_centroids(y, reps.centroids)[0];
}

Assignment assign_clusters(const BlockObservation& obs,
                           const RepresentativeSet& reps,
                           const TrainingPlan& plan) {
  if (obs.t_t != plan.t_t) {
    throw std::invalid_argument("observation and plan disagree on t_t");
  }
  Assignment a;
  a.cluster.resize(obs.y.cols());
  for (int n = 0; n < plan.t_t; ++n) a.cluster[n] = plan.trained[n];
  if (obs.t_d > 0) {
    nearest_into(obs.y.rightCols(obs.t_d), reps.centroids,
                 a.cluster.data() + plan.t_t);
  }
  return a;
}

Eigen::MatrixXcd update_centroids(const Eigen::MatrixXcd& y,
                                  const Assignment& assignment,
                                  SymmetryCondition condition,
                                  const Eigen::MatrixXcd& previous) {
  const int K = static_cast<int>(previous.cols());
  if (static_cast<Eigen::Index>(assignment.cluster.size()) != y.cols()) {
    throw std::invalid_argument("assignment length mismatch");
  }
  // Per-cluster sums, one pass over the block.
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(y.rows(), K);
  Eigen::VectorXd cnt = Eigen::VectorXd::Zero(K);
  for (Eigen::Index n = 0; n < y.cols(); ++n) {
    const int k = assignment.cluster[n];
    if (k < 0 || k >= K) throw std::invalid_argument("cluster out of range");
    sum.col(k) += y.col(n);
    cnt[k] += 1.0;
  }

  Eigen::MatrixXcd c = previous;
  const std::complex<double> j{0.0, 1.0};
  switch (condition) {
    case SymmetryCondition::kNone:
      for (int k = 0; k < K; ++k) {
        if (cnt[k] > 0.0) c.col(k) = sum.col(k) / cnt[k];
      }
      break;
    case SymmetryCondition::kCond1:
      for (int k = 0; k < K / 2; ++k) {
        const double den = cnt[k] + cnt[k + K / 2];
        if (den > 0.0) {
          c.col(k) = (sum.col(k) - sum.col(k + K / 2)) / den;
        }
        c.col(k + K / 2) = -c.col(k);
      }
      break;
    case SymmetryCondition::kCond2: {
      const int q = K / 4;
      for (int k = 0; k < q; ++k) {
        const double den =
            cnt[k] + cnt[k + q] + cnt[k + 2 * q] + cnt[k + 3 * q];
        if (den > 0.0) {
          c.col(k) = (sum.col(k) - sum.col(k + q) - j * sum.col(k + 2 * q) +
                      j * sum.col(k + 3 * q)) /
                     den;
        }
        c.col(k + q) = -c.col(k);
        c.col(k + 2 * q) = j * c.col(k);
        c.col(k + 3 * q) = -j * c.col(k);
      }
      break;
    }
  }
  return c;
}

DecodeResult mcd_decode(const BlockObservation& obs,
                        const RepresentativeSet& reps) {
  DecodeResult res;
  res.reps = reps;
  res.iterations = 1;
  if (obs.t_d > 0) {
    res.decoded = nearest_centroids(obs.y.rightCols(obs.t_d), reps.centroids);
  }
  return res;
}

DecodeResult supervised_decode(const BlockObservation& obs,
                               const TrainingPlan& plan,
                               const SegmentPlan& seg_plan, const LabelSet& ls,
                               RepresentativeSet reps) {
  if (obs.t_d != seg_plan.segments * seg_plan.slots_per_segment) {
    throw std::invalid_argument("segment plan does not cover the data slots");
  }
  if (reps.sets.empty()) {
    throw std::invalid_argument("supervised decoding needs sample sets");
  }
  const int S = seg_plan.segments;
  const int sps = seg_plan.slots_per_segment;

  DecodeResult res;
  res.decoded.assign(obs.t_d, 0);
  res.segment_pass.assign(S, 0);

  std::vector<int> unresolved(S);
  std::iota(unresolved.begin(), unresolved.end(), 0);
  std::vector<int> detected(sps);

  for (int sweep = 0; sweep <= S && !unresolved.empty(); ++sweep) {
    res.iterations = sweep + 1;
    std::vector<int> still_failing;
    bool any_pass = false;
    for (int s : unresolved) {
      const auto ys = obs.y.middleCols(obs.t_t + s * sps, sps);
      nearest_into(ys, reps.centroids, detected.data());
      std::copy(detected.begin(), detected.end(),
                res.decoded.begin() + s * sps);
      if (!verify_segment(detected, seg_plan, ls)) {
        still_failing.push_back(s);
        continue;
      }
      res.segment_pass[s] = 1;
      any_pass = true;
      for (int v = 0; v < sps; ++v) {
        const Eigen::VectorXcd y = ys.col(v);
        const int k = detected[v];
        reps.sets[k].push_back(y);
        for (const auto& [partner, factor] :
             symmetry_partners(k, ls.K, ls.condition)) {
          reps.sets[partner].push_back(factor * y);
        }
      }
      reps.refresh_centroids();
    }
    unresolved = std::move(still_failing);
    if (!any_pass) break;
  }

  res.reps = std::move(reps);
  return res;
}

DecodeResult semisupervised_decode(const BlockObservation& obs,
                                   const TrainingPlan& plan,
                                   const LabelSet& ls, RepresentativeSet reps,
                                   int iter_max, bool allow_unconstrained) {
  if (iter_max < 1) throw std::invalid_argument("iter_max must be positive");
  if (ls.condition == SymmetryCondition::kNone && !allow_unconstrained) {
    throw std::invalid_argument(
        "label set has no symmetry; unconstrained updates must be "
        "requested explicitly");
  }

  DecodeResult res;
  Assignment prev;
  for (int it = 1; it <= iter_max; ++it) {
    res.iterations = it;
    Assignment a = assign_clusters(obs, reps, plan);
    reps.centroids =
        update_centroids(obs.y, a, ls.condition, reps.centroids);
    res.objective.push_back(objective(obs.y, reps.centroids, a));
    res.per_iteration.emplace_back(a.cluster.begin() + obs.t_t,
                                   a.cluster.end());
    const bool converged = it > 1 && a == prev;
    prev = std::move(a);
    if (converged) break;
  }
  res.decoded = res.per_iteration.back();
  reps.sets.clear();
  reps.counts.clear();
  res.reps = std::move(reps);
  return res;
}

}  // namespace qmimo
