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

#include "qmimo/quantizer.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace qmimo {
namespace {

constexpr int kMaxBits = 8;

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double std_normal_pdf(double x) {
  return 0.39894228040143267793994605993438 * std::exp(-0.5 * x * x);
}

}  // namespace

QuantizerSpec::QuantizerSpec(int bits_, double step_)
    : bits(bits_), step(step_) {
  if (bits < 1 || bits > kMaxBits) {
    throw std::invalid_argument("quantizer resolution must be 1..8 bits");
  }
  if (!(step > 0.0)) {
    throw std::invalid_argument("quantizer step must be positive");
  }
}

double QuantizerSpec::threshold(int l) const {
  if (l < 1 || l >= levels()) {
    throw std::invalid_argument("threshold index out of range");
  }
  return (l - levels() / 2) * step;
}

double quantize(double r, const QuantizerSpec& q) {
  if (r == 0.0) return 0.5 * q.step;
  const int half = q.levels() / 2;
  double l = std::ceil(r / q.step + half);
  if (l < 1.0) l = 1.0;
  if (l >= q.levels()) return (q.levels() - 1) * q.step / 2;
  // literally tau_l - step/2 so a table implementation rounds identically
  return (l - half) * q.step - q.step / 2;
}

std::complex<double> quantize(std::complex<double> r, const QuantizerSpec& q) {
  return {quantize(r.real(), q), quantize(r.imag(), q)};
}

Eigen::MatrixXcd quantize(const Eigen::MatrixXcd& r, const QuantizerSpec& q) {
  Eigen::MatrixXcd out(r.rows(), r.cols());
  for (Eigen::Index j = 0; j < r.cols(); ++j) {
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
      out(i, j) = quantize(r(i, j), q);
    }
  }
  return out;
}

double gaussian_distortion(int bits, double step) {
  const QuantizerSpec q(bits, step);
  const int L = q.levels();
  // Sum over cells of int_{a}^{c} (out - r)^2 phi(r) dr with
  //   int phi = Phi(c) - Phi(a)
  //   int r phi = phi(a) - phi(c)
  //   int r^2 phi = Phi(c) - Phi(a) + a phi(a) - c phi(c).
  double d = 0.0;
  for (int l = 1; l <= L; ++l) {
    const bool lo_open = l == 1;
    const bool hi_open = l == L;
    const double a = lo_open ? 0.0 : q.threshold(l - 1);
    const double c = hi_open ? 0.0 : q.threshold(l);
    const double Pa = lo_open ? 0.0 : std_normal_cdf(a);
    const double Pc = hi_open ? 1.0 : std_normal_cdf(c);
    const double pa = lo_open ? 0.0 : std_normal_pdf(a);
    const double pc = hi_open ? 0.0 : std_normal_pdf(c);
    const double out = (l - L / 2 - 0.5) * step;
    const double p0 = Pc - Pa;
    const double p1 = pa - pc;
    const double p2 = p0 + a * pa - c * pc;
    d += out * out * p0 - 2.0 * out * p1 + p2;
  }
  return d;
}

double optimal_standard_step(int bits) {
  if (bits < 1 || bits > kMaxBits) {
    throw std::invalid_argument("quantizer resolution must be 1..8 bits");
  }
  static double cache[kMaxBits + 1];
  static std::once_flag once[kMaxBits + 1];
  std::call_once(once[bits], [bits] {
    const double gr = 0.61803398874989484820458683436564;
    double lo = 1e-6;
    double hi = 4.0 * (1 << (bits - 1));
    double c = hi - gr * (hi - lo);
    double d = lo + gr * (hi - lo);
    double fc = gaussian_distortion(bits, c);
    double fd = gaussian_distortion(bits, d);
    while (hi - lo > 1e-6) {
      if (fc < fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - gr * (hi - lo);
        fc = gaussian_distortion(bits, c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + gr * (hi - lo);
        fd = gaussian_distortion(bits, d);
      }
    }
    cache[bits] = 0.5 * (lo + hi);
  });
  return cache[bits];
}

double system_step(int bits, int nt, double n0) {
  if (nt < 1 || !(n0 > 0.0)) {
    throw std::invalid_argument("system_step: bad nt or n0");
  }
  return std::sqrt(0.5 * (nt + n0)) * optimal_standard_step(bits);
}

}  // namespace qmimo
