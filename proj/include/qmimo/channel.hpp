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

#ifndef QMIMO_CHANNEL_HPP_
#define QMIMO_CHANNEL_HPP_

#include <vector>

#include <Eigen/Dense>

#include "qmimo/labels.hpp"
#include "qmimo/quantizer.hpp"
#include "qmimo/rng.hpp"

namespace qmimo {

// Complex noise level and the matching per-antenna SNR rho = nt / n0.
struct NoiseSpec {
  double n0 = 1.0;   // E|z_i|^2
  double rho = 1.0;  // transmit power nt over n0

  static NoiseSpec from_snr_db(double snr_db, int nt);
  static NoiseSpec from_n0(double n0, int nt);
};

// nr x nt channel, entries i.i.d. unit-variance circular complex Gaussian,
// drawn column by column.
Eigen::MatrixXcd draw_channel(int nr, int nt, Rng& rng);

// One fading block after the ADC. Slots 0 .. t_t-1 carry training labels,
// the rest carry data; transmitted keeps the ground truth for every slot
// (the data part is for scoring only).
struct BlockObservation {
  Eigen::MatrixXcd y;  // nr x (t_t + t_d), quantized
  int t_t = 0;
  int t_d = 0;
  std::vector<int> transmitted;
};

// y[:,n] = Q(H x[n] + z[n]) with z i.i.d. CN(0, n0), noise drawn slot by
// slot, antenna by antenna.
BlockObservation simulate_block(const Eigen::MatrixXcd& H, const LabelSet& ls,
                                const std::vector<int>& slot_labels, int t_t,
                                const QuantizerSpec& q, const NoiseSpec& noise,
                                Rng& noise_rng);

}  // namespace qmimo

#endif  // QMIMO_CHANNEL_HPP_
