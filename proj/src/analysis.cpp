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

#include "qmimo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qmimo {
namespace {

constexpr double kTwoOverPi = 0.63661977236758134307553505349006;

double binomial(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v *= static_cast<double>(n - k + i) / i;
  return v;
}

}  // namespace

double gaussian_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

BussgangModel bussgang_model(const Eigen::MatrixXcd& H, double n0) {
  if (!(n0 > 0.0)) throw std::invalid_argument("n0 must be positive");
  const int nr = static_cast<int>(H.rows());
  BussgangModel m;
  m.sigma_r = H * H.adjoint();
  m.sigma_r.diagonal().array() += n0;

  const Eigen::VectorXd d = m.sigma_r.diagonal().real();
  const Eigen::VectorXd dinv_sqrt = d.cwiseSqrt().cwiseInverse();
  m.f = std::sqrt(kTwoOverPi) * dinv_sqrt;
  m.a = m.f.asDiagonal() * H;
  m.a_low = std::sqrt(kTwoOverPi / n0) * H;

  Eigen::MatrixXcd p = dinv_sqrt.asDiagonal() * m.sigma_r *
                       dinv_sqrt.asDiagonal();
  // unit by construction; rounding noise here would be amplified by the
  // infinite slope of asin at 1
  p.diagonal().setOnes();
  Eigen::MatrixXcd arcsin_p(nr, nr);
  for (int c = 0; c < nr; ++c) {
    for (int r = 0; r < nr; ++r) {
      // rounding can push a correlation one ulp past 1; asin would NaN
      const double re = std::clamp(p(r, c).real(), -1.0, 1.0);
      const double im = std::clamp(p(r, c).imag(), -1.0, 1.0);
      arcsin_p(r, c) = {std::asin(re), std::asin(im)};
    }
  }
  m.sigma_w = kTwoOverPi * (arcsin_p - p);
  m.sigma_w.diagonal() += kTwoOverPi * n0 * d.cwiseInverse();
  return m;
}

double pairwise_sigma_sq(const Eigen::VectorXcd& xk,
                         const Eigen::VectorXcd& xk2, double n0) {
  if (xk.size() != xk2.size()) throw std::invalid_argument("length mismatch");
  if (!(n0 > 0.0)) throw std::invalid_argument("n0 must be positive");
  return kTwoOverPi / n0 * (xk - xk2).squaredNorm();
}

double pairwise_ver_low_snr(double sigma_sq, int nr) {
  if (nr < 1) throw std::invalid_argument("nr must be positive");
  if (sigma_sq < 0.0) throw std::invalid_argument("sigma_sq must be >= 0");
  if (sigma_sq == 0.0) return 0.5;
  const double arg = std::sqrt(nr / (1.0 + 2.0 / sigma_sq));
  return 0.5 * std::erfc(arg * M_SQRT1_2);
}

double ver_upper_low_snr(const LabelSet& ls, double n0, int nr) {
  double sum = 0.0;
  for (int k = 0; k < ls.K; ++k) {
    for (int k2 = 0; k2 < ls.K; ++k2) {
      if (k2 == k) continue;
      const double s2 =
          pairwise_sigma_sq(ls.labels.col(k), ls.labels.col(k2), n0);
      sum += pairwise_ver_low_snr(s2, nr);
    }
  }
  return std::min(1.0, sum / ls.K);
}

double ver_upper_low_snr_psk(const LabelSet& ls, double n0, int nr) {
  double sum = 0.0;
  for (int k2 = 1; k2 < ls.K; ++k2) {
    const double s2 =
        pairwise_sigma_sq(ls.labels.col(0), ls.labels.col(k2), n0);
    sum += pairwise_ver_low_snr(s2, nr);
  }
  return std::min(1.0, sum);
}

double sign_collision_prob(int real_dims, int d, int nr) {
  if (real_dims < 1 || nr < 1) throw std::invalid_argument("bad dimensions");
  if (d < 1 || d > real_dims) {
    throw std::invalid_argument("d must be in 1..real_dims");
  }
  if (d == real_dims) return 0.0;  // antipodal sign patterns never collide
  const double base =
      kTwoOverPi *
      std::atan(std::sqrt(static_cast<double>(real_dims - d) / d));
  return std::pow(base, 2 * nr);
}

double asymptotic_ver_bound(Modulation mod, int nt, int nr) {
  if (nt < 1 || nr < 1) throw std::invalid_argument("bad dimensions");
  int D = 0;
  switch (mod) {
    case Modulation::kBpsk: D = nt; break;
    case Modulation::kQpsk: D = 2 * nt; break;
    default:
      throw std::invalid_argument(
          "asymptotic bound is defined for bpsk and qpsk only");
  }
  double sum = 0.0;
  for (int d = 1; d <= D; ++d) {
    sum += binomial(D, d) * sign_collision_prob(D, d, nr);
  }
  return 0.5 * sum;
}

}  // namespace qmimo
