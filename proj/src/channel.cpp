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

#include "qmimo/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace qmimo {

NoiseSpec NoiseSpec::from_snr_db(double snr_db, int nt) {
  if (nt < 1) throw std::invalid_argument("nt must be positive");
  NoiseSpec s;
  s.rho = std::pow(10.0, snr_db / 10.0);
  s.n0 = nt / s.rho;
  return s;
}

NoiseSpec NoiseSpec::from_n0(double n0, int nt) {
  if (nt < 1 || !(n0 > 0.0)) throw std::invalid_argument("bad n0 or nt");
  NoiseSpec s;
  s.n0 = n0;
  s.rho = nt / n0;
  return s;
}

Eigen::MatrixXcd draw_channel(int nr, int nt, Rng& rng) {
  if (nr < 1 || nt < 1) throw std::invalid_argument("bad channel dimensions");
  Eigen::MatrixXcd h(nr, nt);
  for (int j = 0; j < nt; ++j) {
    for (int i = 0; i < nr; ++i) h(i, j) = rng.cnormal();
  }
  return h;
}

BlockObservation simulate_block(const Eigen::MatrixXcd& H, const LabelSet& ls,
                                const std::vector<int>& slot_labels, int t_t,
                                const QuantizerSpec& q, const NoiseSpec& noise,
                                Rng& noise_rng) {
  const int nr = static_cast<int>(H.rows());
  const int tb = static_cast<int>(slot_labels.size());
  if (H.cols() != ls.nt) {
    throw std::invalid_argument("channel width does not match label set");
  }
  if (t_t < 0 || t_t > tb) throw std::invalid_argument("bad training length");

  const double sigma = std::sqrt(0.5 * noise.n0);
  BlockObservation obs;
  obs.t_t = t_t;
  obs.t_d = tb - t_t;
  obs.transmitted = slot_labels;
  obs.y.resize(nr, tb);
  Eigen::VectorXcd r(nr);
  for (int n = 0; n < tb; ++n) {
    const int k = slot_labels[n];
    if (k < 0 || k >= ls.K) throw std::invalid_argument("label out of range");
    r.noalias() = H * ls.labels.col(k);
    for (int i = 0; i < nr; ++i) {
      const std::complex<double> z{sigma * noise_rng.normal(),
                                   sigma * noise_rng.normal()};
      obs.y(i, n) = quantize(r[i] + z, q);
    }
  }
  return obs;
}

}  // namespace qmimo
