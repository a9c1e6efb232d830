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

#include "qmimo/design.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <stdexcept>

#include "qmimo/rng.hpp"

namespace qmimo {
namespace {

// Pairwise Hamming distances as a flat K x K byte matrix when K is small
// enough; otherwise distances are computed on demand.
class DistanceOracle {
 public:
  explicit DistanceOracle(const Eigen::MatrixXd& real_labels)
      : labels_(real_labels), k_(static_cast<int>(real_labels.cols())) {
    if (k_ <= 2048) {
      table_.assign(static_cast<std::size_t>(k_) * k_, 0);
      for (int a = 0; a < k_; ++a) {
        for (int b = a + 1; b < k_; ++b) {
          const std::uint8_t d = static_cast<std::uint8_t>(
              hamming_distance(labels_.col(a), labels_.col(b)));
          table_[static_cast<std::size_t>(a) * k_ + b] = d;
          table_[static_cast<std::size_t>(b) * k_ + a] = d;
        }
      }
    }
  }

  int operator()(int a, int b) const {
    if (!table_.empty()) {
      return table_[static_cast<std::size_t>(a) * k_ + b];
    }
    return hamming_distance(labels_.col(a), labels_.col(b));
  }

 private:
  const Eigen::MatrixXd& labels_;
  int k_;
  std::vector<std::uint8_t> table_;
};

int d_min_of(const DistanceOracle& dist, const std::vector<int>& subset) {
  int best = INT_MAX;
  for (std::size_t a = 0; a + 1 < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      best = std::min(best, dist(subset[a], subset[b]));
      if (best == 0) return 0;
    }
  }
  return best;
}

// d_min of the subset with element `pos` replaced by `candidate`, aborting
// with -1 as soon as it provably fails to exceed `beat`.
int d_min_exceeds(const DistanceOracle& dist, const std::vector<int>& subset,
                  std::size_t pos, int candidate, int beat) {
  int best = INT_MAX;
  for (std::size_t a = 0; a < subset.size(); ++a) {
    const int va = a == pos ? candidate : subset[a];
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      const int vb = b == pos ? candidate : subset[b];
      const int d = dist(va, vb);
      if (d <= beat) return -1;
      best = std::min(best, d);
    }
  }
  return best;
}

void check_args(const LabelSet& ls, int k_tilde) {
  if (k_tilde < 2 || k_tilde > ls.K) {
    throw std::invalid_argument("subset size must be in 2..K");
  }
}

}  // namespace

int subset_d_min(const Eigen::MatrixXd& real_labels,
                 const std::vector<int>& subset) {
  if (subset.size() < 2) {
    throw std::invalid_argument("subset needs at least two labels");
  }
  for (int idx : subset) {
    if (idx < 0 || idx >= real_labels.cols()) {
      throw std::invalid_argument("subset index out of range");
    }
  }
  int best = INT_MAX;
  for (std::size_t a = 0; a + 1 < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      const int d =
          hamming_distance(real_labels.col(subset[a]), real_labels.col(subset[b]));
      if (d == 0) {
        throw std::invalid_argument("subset contains duplicate labels");
      }
      best = std::min(best, d);
    }
  }
  return best;
}

bool negation_closed(const LabelSet& ls, const std::vector<int>& subset) {
  for (int idx : subset) {
    const Eigen::VectorXcd neg = -ls.labels.col(idx);
    bool found = false;
    for (int other : subset) {
      if ((ls.labels.col(other) - neg).cwiseAbs().maxCoeff() < 1e-9) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

DesignResult exhaustive_design(const LabelSet& ls, int k_tilde,
                               std::uint64_t cap) {
  check_args(ls, k_tilde);
  // C(K, k_tilde) with early saturation.
  long double combos = 1.0L;
  for (int i = 1; i <= k_tilde; ++i) {
    combos = combos * (ls.K - k_tilde + i) / i;
    if (combos > 2.0L * cap) break;
  }
  if (combos > static_cast<long double>(cap)) {
    throw std::invalid_argument("combination count exceeds enumeration cap");
  }

  const Eigen::MatrixXd real = ls.real_labels();
  const DistanceOracle dist(real);
  std::vector<int> subset(k_tilde);
  std::iota(subset.begin(), subset.end(), 0);
  DesignResult best;
  best.d_min = -1;
  for (;;) {
    const int d = d_min_of(dist, subset);
    if (d > best.d_min) {
      best.d_min = d;
      best.subset = subset;
    }
    // Next combination in lexicographic order.
    int i = k_tilde - 1;
    while (i >= 0 && subset[i] == ls.K - k_tilde + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int j = i + 1; j < k_tilde; ++j) subset[j] = subset[j - 1] + 1;
  }
  best.negation_closed = negation_closed(ls, best.subset);
  return best;
}

DesignResult greedy_design(const LabelSet& ls, int k_tilde, int restarts,
                           std::uint64_t seed) {
  check_args(ls, k_tilde);
  if (restarts < 1) throw std::invalid_argument("restarts must be positive");

  const Eigen::MatrixXd real = ls.real_labels();
  const DistanceOracle dist(real);

  DesignResult best;
  best.d_min = -1;
  std::vector<int> pool(ls.K);
  for (int r = 0; r < restarts; ++r) {
    Rng rng(seed, static_cast<std::uint64_t>(r), Stream::kDesign);
    // Partial Fisher-Yates draw of k_tilde distinct labels.
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> subset(k_tilde);
    for (int i = 0; i < k_tilde; ++i) {
      const auto j =
          i + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(ls.K - i)));
      std::swap(pool[i], pool[j]);
      subset[i] = pool[i];
    }
    std::sort(subset.begin(), subset.end());

    int current = d_min_of(dist, subset);
    std::vector<bool> member(ls.K, false);
    for (int idx : subset) member[idx] = true;

    for (bool improved = true; improved;) {
      improved = false;
      for (std::size_t pos = 0; pos < subset.size() && !improved; ++pos) {
        for (int cand = 0; cand < ls.K && !improved; ++cand) {
          if (member[cand]) continue;
          const int d = d_min_exceeds(dist, subset, pos, cand, current);
          if (d > current) {
            member[subset[pos]] = false;
            member[cand] = true;
            subset[pos] = cand;
            std::sort(subset.begin(), subset.end());
            current = d;
            improved = true;
          }
        }
      }
    }

    if (current > best.d_min) {
      best.d_min = current;
      best.subset = subset;
    }
  }
  best.negation_closed = negation_closed(ls, best.subset);
  return best;
}

}  // namespace qmimo
