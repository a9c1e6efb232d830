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

#ifndef QMIMO_HARNESS_HPP_
#define QMIMO_HARNESS_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qmimo/labels.hpp"
#include "qmimo/training.hpp"

namespace qmimo {

// One simulation scenario. Every random quantity is keyed by
// (seed, trial, stream), so results do not depend on worker count or trial
// execution order.
struct ScenarioConfig {
  std::string name = "scenario";
  int nt = 2;
  int nr = 16;
  int bits = 1;
  Modulation mod = Modulation::kBpsk;
  int l_t = 3;
  TrainingMode mode = TrainingMode::kSubspace;
  int t_d = 500;
  int t_b = 0;  // 0: block is t_t + t_d; else fixed block, t_d = t_b - t_t
  std::string detector = "mcd";  // mcd | supervised | semi
  int iter_max = 3;
  std::vector<double> snr_db = {0.0, 5.0, 10.0};
  long trials = 1000;
  std::uint64_t seed = 1;
  bool crc = false;
  int l_data = 16;
  int l_crc = 24;
  int k_tilde = 0;  // 0: full label set; else transmit from a designed subset
  std::string design_method = "greedy";  // greedy | exhaustive
  int design_restarts = 50;
  std::string reps = "empirical";  // empirical | exact
  bool semi_unconstrained = false;
  int workers = 1;
};

// Optional grid around a base config; the cartesian product of all
// non-empty axes (times SNR points) is capped at 10^4 rows.
struct SweepSpec {
  std::vector<int> l_t;
  std::vector<int> k_tilde;
  std::vector<std::pair<int, int>> nr_bits;

  bool empty() const {
    return l_t.empty() && k_tilde.empty() && nr_bits.empty();
  }
};

struct ParsedConfig {
  ScenarioConfig base;
  SweepSpec sweep;
};

// Flat key=value file, '#' comments; unknown keys are an error.
ParsedConfig parse_config_file(const std::string& path);
ParsedConfig parse_config_text(const std::string& text);

void validate(const ScenarioConfig& cfg);

struct SnrPoint {
  double snr_db = 0.0;
  int t_t = 0;
  int t_d = 0;
  long long bit_errors = 0;
  long long bits = 0;
  long long vec_errors = 0;
  long long vectors = 0;
  long long false_passes = 0;  // CRC passed on a wrong segment (supervised)
  double ber = 0.0;
  double ver = 0.0;
  double eta = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  long elapsed_ms = 0;
};

struct ScenarioResult {
  ScenarioConfig cfg;
  std::vector<SnrPoint> points;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg);

// 95% Wilson score interval for errors out of n.
std::pair<double, double> wilson_interval(long long errors, long long n);

// (t_d / t_b) (1 - ber) * payload bits per slot; the payload rate is
// log2(k_tilde) for subset transmission, otherwise nt log2 M scaled by
// l_data / (l_data + l_crc) when CRC framing is on.
double spectral_efficiency(const ScenarioConfig& cfg, int t_t, int t_d,
                           double ber);

// Expands the sweep into per-combination configs (suffixed names).
std::vector<ScenarioConfig> expand_sweep(const ScenarioConfig& base,
                                         const SweepSpec& sweep);

// scenario_id,detector,modulation,Nt,Nr,b,Lt,mode,Td,crc,snr_db,trials,
// bit_errors,bits,BER,vec_errors,vectors,VER,eta,ci_low,ci_high,seed,
// elapsed_ms
void write_csv(std::ostream& out, const std::vector<ScenarioResult>& results);

// Companion gnuplot script plotting BER vs SNR per scenario from the CSV.
void write_gnuplot(std::ostream& out, const std::string& csv_path,
                   const std::vector<ScenarioResult>& results);

}  // namespace qmimo

#endif  // QMIMO_HARNESS_HPP_
