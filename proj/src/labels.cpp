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

#include "qmimo/labels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qmimo {
namespace {

constexpr double kTol = 1e-9;

bool near(std::complex<double> a, std::complex<double> b) {
  return std::abs(a.real() - b.real()) < kTol &&
         std::abs(a.imag() - b.imag()) < kTol;
}

// Index of q in the point list, or -1.
int find_point(const std::vector<std::complex<double>>& pts,
               std::complex<double> q) {
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    if (near(pts[i], q)) return i;
  }
  return -1;
}

// Permutation p with points[p[i]] == op(points[i]), empty if not closed.
std::vector<int> point_permutation(const Constellation& c,
                                   std::complex<double> factor) {
  std::vector<int> perm(c.points.size());
  for (int i = 0; i < c.size(); ++i) {
    const int j = find_point(c.points, factor * c.points[i]);
    if (j < 0) return {};
    perm[i] = j;
  }
  return perm;
}

// Gray mapping of two bits onto four amplitude levels {-3,-1,+1,+3}.
double gray4(unsigned bits) {
  static const double level[4] = {-3.0, -1.0, +3.0, +1.0};  // 00,01,10,11
  return level[bits & 3u];
}

}  // namespace

Modulation modulation_from_string(const std::string& name) {
  if (name == "bpsk") return Modulation::kBpsk;
  if (name == "qpsk") return Modulation::kQpsk;
  if (name == "8psk") return Modulation::k8Psk;
  if (name == "8qam") return Modulation::k8Qam;
  if (name == "16qam") return Modulation::k16Qam;
  throw std::invalid_argument("unknown modulation: " + name);
}

const char* to_string(Modulation m) {
  switch (m) {
    case Modulation::kBpsk: return "bpsk";
    case Modulation::kQpsk: return "qpsk";
    case Modulation::k8Psk: return "8psk";
    case Modulation::k8Qam: return "8qam";
    case Modulation::k16Qam: return "16qam";
  }
  return "?";
}

const char* to_string(SymmetryCondition c) {
  switch (c) {
    case SymmetryCondition::kNone: return "none";
    case SymmetryCondition::kCond1: return "cond1";
    case SymmetryCondition::kCond2: return "cond2";
  }
  return "?";
}

Constellation build_constellation(Modulation m) {
  Constellation c;
  c.name = m;
  switch (m) {
    case Modulation::kBpsk:
      c.bits_per_symbol = 1;
      c.points = {{+1.0, 0.0}, {-1.0, 0.0}};  // bit 0 -> +1
      break;
    case Modulation::kQpsk: {
      c.bits_per_symbol = 2;
      const double s = 1.0 / std::sqrt(2.0);
      // bit 1 (MSB) flips I, bit 0 flips Q; adjacent symbols differ in one bit.
      for (unsigned b = 0; b < 4; ++b) {
        const double i = (b & 2u) ? -s : +s;
        const double q = (b & 1u) ? -s : +s;
        c.points.push_back({i, q});
      }
      break;
    }
    case Modulation::k8Psk: {
      c.bits_per_symbol = 3;
      // Gray ring: position p on the circle carries pattern p ^ (p >> 1).
      c.points.resize(8);
      for (unsigned p = 0; p < 8; ++p) {
        const unsigned bits = p ^ (p >> 1);
        const double a = 2.0 * M_PI * p / 8.0;
        c.points[bits] = {std::cos(a), std::sin(a)};
      }
      break;
    }
    case Modulation::k8Qam: {
      c.bits_per_symbol = 3;
      // Rectangular 4x2 grid, I in {-3,-1,+1,+3}/sqrt(6), Q in {-1,+1}/sqrt(6).
      const double s = 1.0 / std::sqrt(6.0);
      for (unsigned b = 0; b < 8; ++b) {
        const double i = gray4(b >> 1) * s;
        const double q = (b & 1u) ? -s : +s;
        c.points.push_back({i, q});
      }
      break;
    }
    case Modulation::k16Qam: {
      c.bits_per_symbol = 4;
      const double s = 1.0 / std::sqrt(10.0);
      for (unsigned b = 0; b < 16; ++b) {
        const double i = gray4(b >> 2) * s;
        const double q = gray4(b) * s;
        c.points.push_back({i, q});
      }
      break;
    }
  }
  return c;
}

SymmetryCondition detect_condition(const Constellation& c) {
  const bool neg = !point_permutation(c, {-1.0, 0.0}).empty();
  if (!neg) return SymmetryCondition::kNone;
  const bool rot = !point_permutation(c, {0.0, 1.0}).empty() &&
                   !point_permutation(c, {0.0, -1.0}).empty();
  return rot ? SymmetryCondition::kCond2 : SymmetryCondition::kCond1;
}

int LabelSet::label_from_bits(std::uint32_t bits) const {
  if (bits >= bits_to_label_.size() || bits_to_label_[bits] < 0) {
    throw std::invalid_argument("bit pattern out of range");
  }
  return bits_to_label_[bits];
}

Eigen::VectorXd LabelSet::real_label(int k) const {
  Eigen::VectorXd v(2 * nt);
  v.head(nt) = labels.col(k).real();
  v.tail(nt) = labels.col(k).imag();
  return v;
}

Eigen::MatrixXd LabelSet::real_labels() const {
  Eigen::MatrixXd r(2 * nt, K);
  for (int k = 0; k < K; ++k) r.col(k) = real_label(k);
  return r;
}

LabelSet enumerate_labels(const Constellation& c, int nt) {
  if (nt < 1) throw std::invalid_argument("nt must be positive");
  const int M = c.size();
  const double bits = nt * std::log2(static_cast<double>(M));
  if (bits > 20.0 + 1e-9) {
    throw std::invalid_argument("label set too large (K > 2^20)");
  }
  std::int64_t K = 1;
  for (int a = 0; a < nt; ++a) K *= M;

  const SymmetryCondition cond = detect_condition(c);
  const std::vector<int> neg = point_permutation(c, {-1.0, 0.0});
  const std::vector<int> rot = point_permutation(c, {0.0, 1.0});

  // Tuples are encoded base M, antenna 0 most significant, so numeric order
  // is lexicographic order.
  const auto apply = [&](const std::vector<int>& perm, std::int64_t v) {
    std::int64_t out = 0, base = 1;
    for (int a = 0; a < nt; ++a) {
      out += static_cast<std::int64_t>(perm[v % M]) * base;
      base *= M;
      v /= M;
    }
    return out;
  };

  std::vector<std::int64_t> order;
  order.reserve(K);
  if (cond == SymmetryCondition::kCond2) {
    std::vector<std::int64_t> gen;
    for (std::int64_t v = 0; v < K; ++v) {
      const std::int64_t nv = apply(neg, v);
      const std::int64_t rv = apply(rot, v);
      const std::int64_t nrv = apply(neg, rv);
      if (v < nv && v < rv && v < nrv) gen.push_back(v);
    }
    for (auto v : gen) order.push_back(v);
    for (auto v : gen) order.push_back(apply(neg, v));
    for (auto v : gen) order.push_back(apply(rot, v));
    for (auto v : gen) order.push_back(apply(neg, apply(rot, v)));
  } else if (cond == SymmetryCondition::kCond1) {
    std::vector<std::int64_t> gen;
    for (std::int64_t v = 0; v < K; ++v) {
      if (v < apply(neg, v)) gen.push_back(v);
    }
    for (auto v : gen) order.push_back(v);
    for (auto v : gen) order.push_back(apply(neg, v));
  } else {
    for (std::int64_t v = 0; v < K; ++v) order.push_back(v);
  }
  if (static_cast<std::int64_t>(order.size()) != K) {
    throw std::logic_error("label ordering does not cover the set");
  }

  LabelSet ls;
  ls.nt = nt;
  ls.K = static_cast<int>(K);
  ls.condition = cond;
  ls.generator_count = cond == SymmetryCondition::kCond2 ? ls.K / 4
                       : cond == SymmetryCondition::kCond1 ? ls.K / 2
                                                           : ls.K;
  ls.bits_per_vector = nt * c.bits_per_symbol;
  ls.labels.resize(nt, ls.K);
  ls.label_bits_.resize(ls.K);
  ls.bits_to_label_.assign(std::size_t{1} << ls.bits_per_vector, -1);
  for (int k = 0; k < ls.K; ++k) {
    std::int64_t v = order[k];
    std::uint32_t pattern = 0;
    // Decode base-M digits; antenna 0 is the most significant digit and the
    // most significant bit group.
    for (int a = nt - 1; a >= 0; --a) {
      const int sym = static_cast<int>(v % M);
      v /= M;
      ls.labels(a, k) = c.points[sym];
      pattern |= static_cast<std::uint32_t>(sym)
                 << ((nt - 1 - a) * c.bits_per_symbol);
    }
    ls.label_bits_[k] = pattern;
    ls.bits_to_label_[pattern] = k;
  }
  return ls;
}

LabelSet restrict_label_set(const LabelSet& full, std::vector<int> indices) {
  const int K = static_cast<int>(indices.size());
  if (K < 2 || (K & (K - 1)) != 0) {
    throw std::invalid_argument("subset size must be a power of two >= 2");
  }
  std::sort(indices.begin(), indices.end());
  for (int i = 0; i < K; ++i) {
    if (indices[i] < 0 || indices[i] >= full.K) {
      throw std::invalid_argument("subset index out of range");
    }
    if (i > 0 && indices[i] == indices[i - 1]) {
      throw std::invalid_argument("duplicate subset index");
    }
  }

  std::vector<Eigen::VectorXcd> pts;
  pts.reserve(K);
  for (int idx : indices) pts.push_back(full.labels.col(idx));

  const auto find = [&](const Eigen::VectorXcd& q) {
    for (int i = 0; i < K; ++i) {
      if ((pts[i] - q).cwiseAbs().maxCoeff() < kTol) return i;
    }
    return -1;
  };
  const auto image = [&](std::complex<double> f) {
    std::vector<int> perm(K);
    for (int i = 0; i < K; ++i) {
      const int j = find(f * pts[i]);
      if (j < 0) return std::vector<int>{};
      perm[i] = j;
    }
    return perm;
  };

  const std::vector<int> neg = image({-1.0, 0.0});
  const std::vector<int> rot = neg.empty() ? std::vector<int>{}
                                           : image({0.0, 1.0});
  SymmetryCondition cond = SymmetryCondition::kNone;
  if (!neg.empty()) {
    cond = rot.empty() ? SymmetryCondition::kCond1 : SymmetryCondition::kCond2;
  }

  // Real-lexicographic compare for picking orbit representatives.
  const auto less = [&](int a, int b) {
    for (int i = 0; i < pts[a].size(); ++i) {
      if (std::abs(pts[a][i].real() - pts[b][i].real()) > kTol) {
        return pts[a][i].real() < pts[b][i].real();
      }
      if (std::abs(pts[a][i].imag() - pts[b][i].imag()) > kTol) {
        return pts[a][i].imag() < pts[b][i].imag();
      }
    }
    return false;
  };

  std::vector<int> order;
  order.reserve(K);
  if (cond == SymmetryCondition::kCond2) {
    std::vector<int> gen;
    for (int i = 0; i < K; ++i) {
      const int n = neg[i], r = rot[i], nr = neg[rot[i]];
      if (less(i, n) && less(i, r) && less(i, nr)) gen.push_back(i);
    }
    if (static_cast<int>(gen.size()) != K / 4) {
      throw std::logic_error("subset orbit decomposition failed");
    }
    for (int g : gen) order.push_back(g);
    for (int g : gen) order.push_back(neg[g]);
    for (int g : gen) order.push_back(rot[g]);
    for (int g : gen) order.push_back(neg[rot[g]]);
  } else if (cond == SymmetryCondition::kCond1) {
    std::vector<int> gen;
    for (int i = 0; i < K; ++i) {
      if (less(i, neg[i])) gen.push_back(i);
    }
    if (static_cast<int>(gen.size()) != K / 2) {
      throw std::logic_error("subset pair decomposition failed");
    }
    for (int g : gen) order.push_back(g);
    for (int g : gen) order.push_back(neg[g]);
  } else {
    for (int i = 0; i < K; ++i) order.push_back(i);
  }

  LabelSet ls;
  ls.nt = full.nt;
  ls.K = K;
  ls.condition = cond;
  ls.generator_count = cond == SymmetryCondition::kCond2 ? K / 4
                       : cond == SymmetryCondition::kCond1 ? K / 2
                                                           : K;
  ls.bits_per_vector = static_cast<int>(std::round(std::log2(K)));
  ls.labels.resize(full.nt, K);
  ls.label_bits_.resize(K);
  ls.bits_to_label_.assign(K, -1);
  for (int k = 0; k < K; ++k) {
    ls.labels.col(k) = pts[order[k]];
    ls.label_bits_[k] = static_cast<std::uint32_t>(k);
    ls.bits_to_label_[k] = k;
  }
  return ls;
}

int hamming_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("hamming_distance: length mismatch");
  }
  int d = 0;
  for (int i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > kTol) ++d;
  }
  return d;
}

}  // namespace qmimo
