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

#ifndef QMIMO_ANALYSIS_HPP_
#define QMIMO_ANALYSIS_HPP_

#include <Eigen/Dense>

#include "qmimo/labels.hpp"

namespace qmimo {

double gaussian_cdf(double x);  // Phi

// Linearization of the 1-bit front end y = sign(Hx + z), x ~ CN(0, I):
// y = A x + w with A = F H, F = sqrt(2/pi) diag(Sigma_r)^{-1/2}, and
// effective-noise covariance
//   Sigma_w = (2/pi) (arcsin(P) - P + n0 D^{-1}),
//   P = D^{-1/2} Sigma_r D^{-1/2},  D = diag(Sigma_r),
// arcsin applied entrywise to real and imaginary parts separately.
struct BussgangModel {
  Eigen::VectorXd f;         // diagonal of F
  Eigen::MatrixXcd a;        // F H
  Eigen::MatrixXcd a_low;    // low-SNR limit sqrt(2/(n0 pi)) H
  Eigen::MatrixXcd sigma_r;  // H H^* + n0 I
  Eigen::MatrixXcd sigma_w;  // exact, Hermitian PSD; -> I as H -> 0
};

BussgangModel bussgang_model(const Eigen::MatrixXcd& H, double n0);

// Low-SNR pairwise statistic sigma^2 = 2 ||x_k - x_k'||^2 / (n0 pi).
double pairwise_sigma_sq(const Eigen::VectorXcd& xk, const Eigen::VectorXcd& xk2,
                         double n0);

// Low-SNR probability of confusing two labels at pairwise statistic
// sigma^2: 1 - Phi(sqrt(nr / (1 + 2/sigma^2))); 1/2 when sigma^2 = 0.
double pairwise_ver_low_snr(double sigma_sq, int nr);

// Union bound (1/K) sum_k sum_{k' != k} pairwise terms, clamped to 1.
double ver_upper_low_snr(const LabelSet& ls, double n0, int nr);

// Same bound using the single sum over k' != 1; valid when every label
// sees the same distance profile (PSK-type sets).
double ver_upper_low_snr_psk(const LabelSet& ls, double n0, int nr);

// P[sign(g_k) = sign(g_k')] in the noise-free 1-bit limit when the stacked
// real labels have d of real_dims coordinates flipped:
// ((2/pi) atan sqrt((real_dims - d)/d))^{2 nr}.
double sign_collision_prob(int real_dims, int d, int nr);

// Noise-free 1-bit VER bound (1/2) sum_d C(D,d) * collision(D,d,nr) with
// D = nt for BPSK and 2 nt for QPSK.
double asymptotic_ver_bound(Modulation mod, int nt, int nr);

}  // namespace qmimo

#endif  // QMIMO_ANALYSIS_HPP_
