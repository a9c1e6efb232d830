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

#ifndef QMIMO_QUANTIZER_HPP_
#define QMIMO_QUANTIZER_HPP_

#include <complex>

#include <Eigen/Dense>

namespace qmimo {

// Mid-rise uniform quantizer with 2^bits levels per real dimension.
// Decision thresholds sit at (l - 2^{bits-1}) * step for l = 1 .. 2^bits - 1;
// the cell (t_{l-1}, t_l] maps to t_l - step/2, and inputs above the top
// threshold saturate at (2^bits - 1) * step / 2. An input of exactly 0 maps
// to +step/2, so the 1-bit quantizer is the sign function scaled by step/2.
struct QuantizerSpec {
  int bits;
  double step;

  QuantizerSpec(int bits_, double step_);

  int levels() const { return 1 << bits; }
  double threshold(int l) const;  // l = 1 .. levels()-1
};

double quantize(double r, const QuantizerSpec& q);
std::complex<double> quantize(std::complex<double> r, const QuantizerSpec& q);
Eigen::MatrixXcd quantize(const Eigen::MatrixXcd& r, const QuantizerSpec& q);

// Mean squared distortion E[(Q(r) - r)^2] for r ~ N(0,1), evaluated in
// closed form per quantization cell.
double gaussian_distortion(int bits, double step);

// Step minimizing the unit-Gaussian distortion (golden-section search,
// tolerance 1e-6, cached per resolution).
double optimal_standard_step(int bits);

// Step matched to the receive power of nt unit-power streams plus noise:
// sqrt((nt + n0) / 2) * optimal_standard_step(bits).
double system_step(int bits, int nt, double n0);

}  // namespace qmimo

#endif  // QMIMO_QUANTIZER_HPP_
