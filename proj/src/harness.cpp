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

#include "qmimo/harness.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qmimo/channel.hpp"
#include "qmimo/design.hpp"
#include "qmimo/detect.hpp"
#include "qmimo/framing.hpp"
#include "qmimo/quantizer.hpp"
#include "qmimo/rng.hpp"

namespace qmimo {
namespace {

bool is_pow2(int v) { return v >= 1 && (v & (v - 1)) == 0; }

void parallel_for(long n, int workers, const std::function<void(long)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  const int count = static_cast<int>(std::min<long>(workers, n));
  pool.reserve(count);
  std::exception_ptr error;
  std::mutex error_mu;
  for (int w = 0; w < count; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const long i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Subset selection for restricted transmission. Follows the design method;
// when the designed minimum distance is already 1 and a negation-closed
// subset of equal distance exists, prefer it so subspace training and the
// constrained updates stay available.
std::vector<int> choose_subset(const ScenarioConfig& cfg, const LabelSet& full) {
  DesignResult designed =
      cfg.design_method == "exhaustive"
          ? exhaustive_design(full, cfg.k_tilde)
          : greedy_design(full, cfg.k_tilde, cfg.design_restarts, cfg.seed);
  if (designed.negation_closed || designed.d_min > 1 ||
      full.condition == SymmetryCondition::kNone ||
      cfg.k_tilde > full.K || cfg.k_tilde % 2 != 0) {
    return designed.subset;
  }
  std::vector<int> closed;
  closed.reserve(cfg.k_tilde);
  for (int g = 0; g < cfg.k_tilde / 2; ++g) closed.push_back(g);
  for (int g = 0; g < cfg.k_tilde / 2; ++g) {
    closed.push_back(g + (full.condition == SymmetryCondition::kCond2
                              ? full.K / 4
                              : full.K / 2));
  }
  if (subset_d_min(full.real_labels(), closed) >= designed.d_min) {
    return closed;
  }
  return designed.subset;
}

struct TrialCounts {
  long long bit_errors = 0;
  long long vec_errors = 0;
  long long false_passes = 0;
};

}  // namespace

ParsedConfig parse_config_text(const std::string& text) {
  ParsedConfig parsed;
  ScenarioConfig& cfg = parsed.base;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  const auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
  };
  const auto split_ints = [](const std::string& v) {
    std::vector<int> out;
    std::istringstream s(v);
    std::string item;
    while (std::getline(s, item, ',')) out.push_back(std::stoi(item));
    return out;
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    bool unknown = false;
    try {
      if (key == "name") cfg.name = val;
      else if (key == "nt") cfg.nt = std::stoi(val);
      else if (key == "nr") cfg.nr = std::stoi(val);
      else if (key == "b") cfg.bits = std::stoi(val);
      else if (key == "mod") cfg.mod = modulation_from_string(val);
      else if (key == "lt") cfg.l_t = std::stoi(val);
      else if (key == "mode") cfg.mode = training_mode_from_string(val);
      else if (key == "td") cfg.t_d = std::stoi(val);
      else if (key == "tb") cfg.t_b = std::stoi(val);
      else if (key == "detector") cfg.detector = val;
      else if (key == "iter_max") cfg.iter_max = std::stoi(val);
      else if (key == "snr_db") {
        cfg.snr_db.clear();
        std::istringstream s(val);
        std::string item;
        while (std::getline(s, item, ',')) cfg.snr_db.push_back(std::stod(item));
      }
      else if (key == "trials") cfg.trials = std::stol(val);
      else if (key == "seed") cfg.seed = std::stoull(val);
      else if (key == "crc") cfg.crc = std::stoi(val) != 0;
      else if (key == "ldata") cfg.l_data = std::stoi(val);
      else if (key == "lcrc") cfg.l_crc = std::stoi(val);
      else if (key == "ktilde") cfg.k_tilde = std::stoi(val);
      else if (key == "design_method") cfg.design_method = val;
      else if (key == "design_restarts") cfg.design_restarts = std::stoi(val);
      else if (key == "reps") cfg.reps = val;
      else if (key == "semi_unconstrained") cfg.semi_unconstrained = std::stoi(val) != 0;
      else if (key == "workers") cfg.workers = std::stoi(val);
      else if (key == "sweep_lt") parsed.sweep.l_t = split_ints(val);
      else if (key == "sweep_ktilde") parsed.sweep.k_tilde = split_ints(val);
      else if (key == "sweep_nr_b") {
        std::istringstream s(val);
        std::string item;
        while (std::getline(s, item, ',')) {
          const auto colon = item.find(':');
          if (colon == std::string::npos) {
            throw std::invalid_argument("expected nr:b pairs");
          }
          parsed.sweep.nr_bits.emplace_back(std::stoi(item.substr(0, colon)),
                                            std::stoi(item.substr(colon + 1)));
        }
      }
      else unknown = true;
    } catch (const std::exception& e) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": bad value for " + key + " (" + e.what() +
                                  ")");
    }
    if (unknown) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": unknown config key: " + key);
    }
  }
  return parsed;
}

ParsedConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void validate(const ScenarioConfig& cfg) {
  if (cfg.nt < 1 || cfg.nr < 1) throw std::invalid_argument("bad antenna counts");
  if (cfg.bits < 1 || cfg.bits > 8) throw std::invalid_argument("bad adc resolution");
  if (cfg.l_t < 1) throw std::invalid_argument("lt must be positive");
  if (cfg.t_d < 1 && cfg.t_b < 1) throw std::invalid_argument("td must be positive");
  if (cfg.trials < 1) throw std::invalid_argument("trials must be positive");
  if (cfg.snr_db.empty()) throw std::invalid_argument("no SNR points");
  if (cfg.workers < 1) throw std::invalid_argument("workers must be positive");
  if (cfg.detector != "mcd" && cfg.detector != "supervised" &&
      cfg.detector != "semi") {
    throw std::invalid_argument("unknown detector: " + cfg.detector);
  }
  if (cfg.iter_max < 1) throw std::invalid_argument("iter_max must be positive");
  if (cfg.reps != "empirical" && cfg.reps != "exact") {
    throw std::invalid_argument("reps must be empirical or exact");
  }
  if (cfg.reps == "exact") {
    if (cfg.bits != 1) {
      throw std::invalid_argument("exact representatives require b = 1");
    }
    if (cfg.detector == "supervised") {
      throw std::invalid_argument(
          "supervised decoding needs empirical sample sets");
    }
  }
  if (cfg.detector == "supervised" && !cfg.crc) {
    throw std::invalid_argument("supervised decoding requires crc framing");
  }
  if (cfg.k_tilde != 0) {
    if (!is_pow2(cfg.k_tilde) || cfg.k_tilde < 2) {
      throw std::invalid_argument("ktilde must be a power of two >= 2");
    }
    if (cfg.crc) {
      throw std::invalid_argument("crc framing with subsets is unsupported");
    }
    if (cfg.design_method != "greedy" && cfg.design_method != "exhaustive") {
      throw std::invalid_argument("unknown design method");
    }
    if (cfg.design_restarts < 1) {
      throw std::invalid_argument("design_restarts must be positive");
    }
  }
}

std::pair<double, double> wilson_interval(long long errors, long long n) {
  if (n < 0 || errors < 0 || errors > n) {
    throw std::invalid_argument("bad counts");
  }
  if (n == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double z2 = z * z;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(errors) / nn;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double spectral_efficiency(const ScenarioConfig& cfg, int t_t, int t_d,
                           double ber) {
  if (t_d < 1 || t_t < 0) throw std::invalid_argument("bad block split");
  if (!(ber >= 0.0 && ber <= 1.0)) throw std::invalid_argument("bad ber");
  const double block = static_cast<double>(t_t) + t_d;
  double bits_per_slot;
  double overhead = 1.0;
  if (cfg.k_tilde != 0) {
    bits_per_slot = std::log2(static_cast<double>(cfg.k_tilde));
  } else {
    bits_per_slot =
        cfg.nt * build_constellation(cfg.mod).bits_per_symbol;
    if (cfg.crc) {
      overhead = static_cast<double>(cfg.l_data) / (cfg.l_data + cfg.l_crc);
    }
  }
  return (t_d / block) * (1.0 - ber) * bits_per_slot * overhead;
}

std::vector<ScenarioConfig> expand_sweep(const ScenarioConfig& base,
                                         const SweepSpec& sweep) {
  const auto lts = sweep.l_t.empty() ? std::vector<int>{base.l_t} : sweep.l_t;
  const auto kts =
      sweep.k_tilde.empty() ? std::vector<int>{base.k_tilde} : sweep.k_tilde;
  const auto nrb = sweep.nr_bits.empty()
                       ? std::vector<std::pair<int, int>>{{base.nr, base.bits}}
                       : sweep.nr_bits;
  const std::size_t rows =
      lts.size() * kts.size() * nrb.size() * base.snr_db.size();
  if (rows > 10000) {
    throw std::invalid_argument("sweep larger than 10^4 points");
  }
  std::vector<ScenarioConfig> out;
  for (const auto [nr, bits] : nrb) {
    for (int kt : kts) {
      for (int lt : lts) {
        ScenarioConfig c = base;
        c.nr = nr;
        c.bits = bits;
        c.k_tilde = kt;
        c.l_t = lt;
        std::string suffix;
        if (!sweep.nr_bits.empty()) {
          suffix += "_nr" + std::to_string(nr) + "b" + std::to_string(bits);
        }
        if (!sweep.k_tilde.empty()) suffix += "_k" + std::to_string(kt);
        if (!sweep.l_t.empty()) suffix += "_lt" + std::to_string(lt);
        c.name = base.name + suffix;
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  const Constellation constellation = build_constellation(cfg.mod);
  const LabelSet full = enumerate_labels(constellation, cfg.nt);

  LabelSet ls;
  TrainingMode mode = cfg.mode;
  if (cfg.k_tilde != 0) {
    ls = restrict_label_set(full, choose_subset(cfg, full));
    // Subset symmetry decides whether subspace training is possible.
    mode = ls.condition == SymmetryCondition::kNone ? TrainingMode::kFull
                                                    : TrainingMode::kSubspace;
  } else {
    ls = full;
  }
  if (mode == TrainingMode::kSubspace &&
      ls.condition == SymmetryCondition::kNone) {
    throw std::invalid_argument(
        "subspace training needs a symmetric label set");
  }
  if (cfg.detector == "semi" &&
      ls.condition == SymmetryCondition::kNone && !cfg.semi_unconstrained) {
    throw std::invalid_argument(
        "label set has no symmetry; set semi_unconstrained=1 to run plain "
        "k-means");
  }

  const bool exact = cfg.reps == "exact";
  TrainingPlan plan;  // empty (t_t = 0) when representatives are exact
  if (!exact) plan = make_training_plan(ls, cfg.l_t, mode);

  ScenarioResult result;
  result.cfg = cfg;
  result.cfg.mode = mode;

  for (double snr_db : cfg.snr_db) {
    const auto start = std::chrono::steady_clock::now();
    const NoiseSpec noise = NoiseSpec::from_snr_db(snr_db, cfg.nt);
    // b = 1 decisions are invariant to the common positive output scale;
    // pinning step = 2 puts observations on the +-1 sign scale that exact
    // representatives live on.
    const QuantizerSpec qspec(
        cfg.bits,
        cfg.bits == 1 ? 2.0 : system_step(cfg.bits, cfg.nt, noise.n0));

    const int t_d = cfg.t_b > 0 ? cfg.t_b - plan.t_t : cfg.t_d;
    if (t_d < 1) {
      throw std::invalid_argument("training does not fit into the block");
    }
    std::optional<SegmentPlan> seg_plan;
    if (cfg.crc) {
      seg_plan.emplace(t_d, ls.bits_per_vector, cfg.l_data, cfg.l_crc);
    }

    std::vector<TrialCounts> counts(cfg.trials);
    parallel_for(cfg.trials, cfg.workers, [&](long trial) {
      Rng channel_rng(cfg.seed, trial, Stream::kChannel);
      Rng noise_rng(cfg.seed, trial, Stream::kNoise);
      Rng data_rng(cfg.seed, trial, Stream::kData);

      const Eigen::MatrixXcd H = draw_channel(cfg.nr, cfg.nt, channel_rng);

      std::vector<int> slots(plan.trained);
      slots.resize(plan.t_t + t_d);
      if (cfg.crc) {
        std::vector<std::uint8_t> data_bits(
            static_cast<std::size_t>(seg_plan->segments) * cfg.l_data);
        for (auto& b : data_bits) {
          b = static_cast<std::uint8_t>(data_rng.uniform_int(2));
        }
        const std::vector<int> framed =
            frame_segments(data_bits, *seg_plan, ls);
        std::copy(framed.begin(), framed.end(), slots.begin() + plan.t_t);
      } else {
        for (int n = 0; n < t_d; ++n) {
          slots[plan.t_t + n] =
              static_cast<int>(data_rng.uniform_int(ls.K));
        }
      }

      const BlockObservation obs =
          simulate_block(H, ls, slots, plan.t_t, qspec, noise, noise_rng);
      const RepresentativeSet reps0 =
          exact ? exact_representatives_1bit(H, ls, noise, cfg.bits)
                : estimate_representatives(obs, plan, ls);

      DecodeResult dec;
      if (cfg.detector == "mcd") {
        dec = mcd_decode(obs, reps0);
      } else if (cfg.detector == "supervised") {
        dec = supervised_decode(obs, plan, *seg_plan, ls, reps0);
      } else {
        dec = semisupervised_decode(obs, plan, ls, reps0, cfg.iter_max,
                                    cfg.semi_unconstrained);
      }

      TrialCounts& c = counts[trial];
      for (int n = 0; n < t_d; ++n) {
        const int truth = obs.transmitted[plan.t_t + n];
        const int got = dec.decoded[n];
        if (got != truth) {
          ++c.vec_errors;
          c.bit_errors +=
              std::popcount(ls.label_bits(got) ^ ls.label_bits(truth));
        }
      }
      if (cfg.detector == "supervised") {
        const int sps = seg_plan->slots_per_segment;
        for (int s = 0; s < seg_plan->segments; ++s) {
          if (!dec.segment_pass[s]) continue;
          for (int v = 0; v < sps; ++v) {
            const int n = s * sps + v;
            if (dec.decoded[n] != obs.transmitted[plan.t_t + n]) {
              ++c.false_passes;
              break;
            }
          }
        }
      }
    });

    SnrPoint point;
    point.snr_db = snr_db;
    point.t_t = plan.t_t;
    point.t_d = t_d;
    for (const TrialCounts& c : counts) {
      point.bit_errors += c.bit_errors;
      point.vec_errors += c.vec_errors;
      point.false_passes += c.false_passes;
    }
    point.vectors = static_cast<long long>(cfg.trials) * t_d;
    point.bits = point.vectors * ls.bits_per_vector;
    point.ber = static_cast<double>(point.bit_errors) / point.bits;
    point.ver = static_cast<double>(point.vec_errors) / point.vectors;
    std::tie(point.ci_low, point.ci_high) =
        wilson_interval(point.bit_errors, point.bits);
    point.eta = spectral_efficiency(cfg, plan.t_t, t_d, point.ber);
    point.elapsed_ms = static_cast<long>(
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start)
            .count());
    result.points.push_back(point);
  }
  return result;
}

void write_csv(std::ostream& out, const std::vector<ScenarioResult>& results) {
  out << "scenario_id,detector,modulation,Nt,Nr,b,Lt,mode,Td,crc,snr_db,"
         "trials,bit_errors,bits,BER,vec_errors,vectors,VER,eta,ci_low,"
         "ci_high,seed,elapsed_ms\n";
  char buf[64];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return std::string(buf);
  };
  for (const ScenarioResult& r : results) {
    const bool exact = r.cfg.reps == "exact";
    for (const SnrPoint& p : r.points) {
      out << r.cfg.name << ',' << r.cfg.detector << ','
          << to_string(r.cfg.mod) << ',' << r.cfg.nt << ',' << r.cfg.nr << ','
          << r.cfg.bits << ',' << (exact ? 0 : r.cfg.l_t) << ','
          << (exact ? "exact" : to_string(r.cfg.mode)) << ',' << p.t_d << ','
          << (r.cfg.crc ? 1 : 0) << ',' << num(p.snr_db) << ','
          << r.cfg.trials << ',' << p.bit_errors << ',' << p.bits << ','
          << num(p.ber) << ',' << p.vec_errors << ',' << p.vectors << ','
          << num(p.ver) << ',' << num(p.eta) << ',' << num(p.ci_low) << ','
          << num(p.ci_high) << ',' << r.cfg.seed << ',' << p.elapsed_ms
          << '\n';
    }
  }
}

void write_gnuplot(std::ostream& out, const std::string& csv_path,
                   const std::vector<ScenarioResult>& results) {
  out << "# BER vs SNR from " << csv_path << "\n"
      << "set datafile separator \",\"\n"
      << "set logscale y\n"
      << "set xlabel \"SNR (dB)\"\n"
      << "set ylabel \"BER\"\n"
      << "set key outside\n"
      << "set grid\n"
      << "plot \\\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& cfg = results[i].cfg;
    out << "  \"" << csv_path << "\" using 11:(strcol(1) eq \"" << cfg.name
        << "\" && strcol(2) eq \"" << cfg.detector
        << "\" ? column(15) : NaN) title \"" << cfg.name << " "
        << cfg.detector << "\" with linespoints"
        << (i + 1 < results.size() ? ", \\\n" : "\n");
  }
}

}  // namespace qmimo
